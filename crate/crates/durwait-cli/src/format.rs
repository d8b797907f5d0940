//! Number serialization: everything emitted by the pipeline carries
//! 12 significant digits, in plain decimal where readable and scientific
//! notation otherwise (like printf %.12g, minus the trailing zeros).

pub fn sig12(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{:.11e}", v);
    let (_, exp) = sci.split_once('e').expect("always present for {:e}");
    let exp: i32 = exp.parse().expect("valid exponent");
    if (-5..12).contains(&exp) {
        let prec = (11 - exp).max(0) as usize;
        trim(format!("{:.*}", prec, v))
    } else {
        let (mant, _) = sci.split_once('e').unwrap();
        format!("{}e{}", trim(mant.to_string()), exp)
    }
}

fn trim(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::sig12;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(1.0), "1");
        assert_eq!(sig12(-2.5), "-2.5");
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(123456789.0), "123456789");
        assert_eq!(sig12(2646.078638990802), "2646.07863899");
        assert_eq!(sig12(1.23e-5), "0.0000123");
        assert_eq!(sig12(1.23e-7), "1.23e-7");
        assert_eq!(sig12(4.5e20), "4.5e20");
        assert_eq!(sig12(3.0303e-9), "3.0303e-9");
    }

    #[test]
    fn roundtrips_to_1e12_relative() {
        for &v in &[2736.4849888883209573, 0.0409857, 9.1e-13, 7.7e17] {
            let back: f64 = sig12(v).parse().unwrap();
            assert!((back - v).abs() / v.abs() < 1e-11, "{v} -> {}", sig12(v));
        }
    }
}
