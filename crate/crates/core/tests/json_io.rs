use iwagrowth::gamma::GammaModule;
use iwagrowth::multivar::HModule;
use iwagrowth::skew::GModule;

#[test]
fn integers_are_strings_everywhere() {
    let g = GammaModule::divisors(3, vec!["X^2+3X+9".parse().unwrap()]).unwrap();
    let h: HModule = serde_json::from_str(r#"{"ring":"h","p":3,"d":3,"relations":[[{"coef":3,"mono":[0,0]}]]}"#).unwrap();
    let m = GModule::gamma_minus(3, 4, 4).unwrap();
    for text in [serde_json::to_string(&g).unwrap(), serde_json::to_string(&h).unwrap(), serde_json::to_string(&m).unwrap()] {
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(no_numbers(&v), "{text}");
    }
}

fn no_numbers(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Number(_) => false,
        serde_json::Value::Array(a) => a.iter().all(no_numbers),
        serde_json::Value::Object(o) => o.values().all(no_numbers),
        _ => true,
    }
}

#[test]
fn malformed_modules_are_rejected() {
    for text in [
        r#"{"ring":"gamma","p":"4","form":"divisors","divisors":["X"]}"#,
        r#"{"ring":"gamma","p":"3","form":"divisors","divisors":["X+"]}"#,
        r#"{"ring":"gamma","p":"3","form":"relations","generators":"2","relations":[["X"]]}"#,
    ] {
        assert!(serde_json::from_str::<GammaModule>(text).is_err(), "{text}");
    }
    assert!(serde_json::from_str::<HModule>(r#"{"ring":"h","p":"3","d":"1","relations":[]}"#).is_err());
    assert!(serde_json::from_str::<GModule>(r#"{"ring":"g","p":"3","d":"2","u":"4","relations":[[{"coef":"1","h":["0","1"],"gamma":"0"}]]}"#).is_err());
}
