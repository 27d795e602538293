use clap::ValueEnum;
use serde::Serialize;

use derange::asymptotics::AsymptoticEstimate;
use derange::{ExactCount, Profile};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Tsv,
}

#[derive(Serialize)]
struct Check {
    method: String,
    value: String,
}

/// One exact result. Field order is the JSON schema.
#[derive(Serialize)]
pub struct Report {
    profile: Vec<u32>,
    value: String,
    method: String,
    elapsed_ms: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    check: Option<Check>,
}

impl Report {
    pub fn new(
        profile: &Profile,
        value: &ExactCount,
        method: &str,
        elapsed_ms: Option<u128>,
    ) -> Self {
        Report {
            profile: profile.parts().to_vec(),
            value: value.to_string(),
            method: method.to_string(),
            elapsed_ms,
            check: None,
        }
    }

    pub fn checked(mut self, method: &str, value: &ExactCount) -> Self {
        self.check = Some(Check {
            method: method.to_string(),
            value: value.to_string(),
        });
        self
    }

    pub fn print(&self, format: Format) {
        match format {
            Format::Plain => println!("{}", self.value),
            Format::Json => println!(
                "{}",
                serde_json::to_string(self).expect("report serializes")
            ),
            Format::Tsv => {
                let profile: Vec<String> = self.profile.iter().map(u32::to_string).collect();
                println!("profile\tmethod\tvalue");
                println!("{}\t{}\t{}", profile.join(","), self.method, self.value);
            }
        }
    }
}

pub fn print_asym(
    family: &str,
    args: serde_json::Value,
    estimate: &AsymptoticEstimate,
    exact: Option<&ExactCount>,
    format: Format,
) {
    let ratio = exact.map(|x| estimate.ratio_to(x));
    let finite = |x: f64| x.is_finite().then_some(x);
    match format {
        Format::Json => {
            let v = serde_json::json!({
                "family": family,
                "args": args,
                "estimate": finite(estimate.value),
                "log_estimate": estimate.log_value,
                "exact": exact.map(ToString::to_string),
                "ratio": ratio,
            });
            println!("{v}");
        }
        Format::Tsv => {
            println!("family\testimate\tlog_estimate\texact\tratio");
            println!(
                "{family}\t{:e}\t{}\t{}\t{}",
                estimate.value,
                estimate.log_value,
                exact.map_or("-".to_string(), ToString::to_string),
                ratio.map_or("-".to_string(), |r| r.to_string())
            );
        }
        Format::Plain => {
            println!("estimate {:e}", estimate.value);
            if let (Some(x), Some(r)) = (exact, ratio) {
                println!("exact    {x}");
                println!("ratio    {r}");
            }
        }
    }
}
