//! Loading JSON models: a valid one, and the diagnostics for broken ones.

use imc::CredalFamily;

const GOOD: &str = r#"{
  "states": ["up", "down"],
  "credal_sets": {
    "up":   [{"up": "0.9", "down": "0.1"}, {"up": "3/4", "down": "1/4"}],
    "down": [{"up": "1/2", "down": "1/2"}]
  }
}"#;

const BROKEN: &[&str] = &[
    r#"{"states": ["a", "b"], "credal_sets": {"a": [{"a": "1/2"}], "b": []}}"#,
    r#"{"states": ["a"], "credal_sets": {"a": [{"a": "-1/2", "q": "3/2"}]}}"#,
    "{\"states\": [\"a\"],\n \"credal_sets\": {\"a\": [{\"a\": 1}]}}",
    r#"{"states": ["a", "a"], "credal_sets": {}}"#,
];

fn main() {
    let fam = CredalFamily::from_json(GOOD).expect("valid model");
    println!("loaded {} states; T̄(1_up) = {:?}", fam.len(), fam.upper_f64(&[1.0, 0.0]).unwrap());
    println!("round trip:\n{}", fam.to_json());
    for text in BROKEN {
        match CredalFamily::from_json(text) {
            Ok(_) => println!("unexpectedly valid: {text}"),
            Err(e) => println!("\n{e}"),
        }
    }
}
