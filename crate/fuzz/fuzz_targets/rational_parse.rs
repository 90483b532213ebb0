#![no_main]

use arbitrary::Arbitrary;
use libfuzzer_sys::fuzz_target;
use pgn::Rational;

#[derive(Arbitrary, Debug)]
struct Input<'a> {
    text: &'a str,
    num: i64,
    den: i64,
}

fuzz_target!(|input: Input| {
    if input.text.len() <= 256 {
        if let Ok(x) = input.text.parse::<Rational>() {
            let back: Rational = x.to_string().parse().expect("display re-parses");
            assert_eq!(back, x);
        }
    }
    if input.den > 0 {
        let x = Rational::frac(input.num, input.den);
        assert_eq!(format!("{}/{}", input.num, input.den).parse::<Rational>().unwrap(), x);
    }
});
