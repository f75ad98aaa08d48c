//! `stutter-annot agree`: agreement statistics over two or more
//! annotations of the same clips.

use super::{detect_kind, load, print_data_error, InputKind, Loaded};
use crate::output::{render_agree, AgreeReport, OutputFormat};
use std::error::Error;
use std::path::PathBuf;
use stutter_annot_core::agreement::{
    cohen_kappa, confusion, fleiss_kappa, label_vector, majority_vote, Kappa,
};
use stutter_annot_core::transforms::{clip_labels, ClipLabels};
use stutter_annot_core::EventCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Metric {
    Cohen,
    Fleiss,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum LabelMode {
    Clip,
}

pub struct AgreeArgs {
    pub paths: Vec<PathBuf>,
    pub metric: Option<Metric>,
    pub labels: LabelMode,
    pub majority: bool,
    pub tier: String,
    pub input_format: Option<InputKind>,
}

pub fn run(args: AgreeArgs, format: OutputFormat) -> Result<u8, Box<dyn Error>> {
    let LabelMode::Clip = args.labels;
    if args.paths.len() < 2 {
        return Err("agree needs at least two annotation files".into());
    }
    let mut label_sets: Vec<Vec<ClipLabels>> = Vec::with_capacity(args.paths.len());
    for path in &args.paths {
        let kind = detect_kind(path, args.input_format);
        match load(path, kind, &args.tier)? {
            Loaded::Parsed { transcript, .. } => label_sets.push(clip_labels(&transcript)),
            Loaded::DataError {
                message,
                diagnostics,
            } => {
                print_data_error(path, &message, &diagnostics);
                return Ok(2);
            }
        }
    }
    let clips = label_sets[0].len();
    for (i, set) in label_sets.iter().enumerate() {
        if set.len() != clips {
            return Err(format!(
                "segment counts differ: {} has {}, {} has {}",
                args.paths[0].display(),
                clips,
                args.paths[i].display(),
                set.len()
            )
            .into());
        }
    }
    if clips == 0 {
        return Err("inputs contain no segments".into());
    }
    let raters = label_sets.len();
    let metric = args.metric.unwrap_or(if raters == 2 {
        Metric::Cohen
    } else {
        Metric::Fleiss
    });

    let mut kappa: Vec<(EventCode, Kappa)> = Vec::new();
    match metric {
        Metric::Cohen => {
            if raters != 2 {
                return Err(format!(
                    "Cohen's kappa is defined for exactly two raters, got {raters}; use --metric fleiss"
                )
                .into());
            }
            for code in EventCode::ALL {
                let x = label_vector(&label_sets[0], code);
                let y = label_vector(&label_sets[1], code);
                kappa.push((code, cohen_kappa(&x, &y).map_err(|e| e.to_string())?));
            }
        }
        Metric::Fleiss => {
            for code in EventCode::ALL {
                let counts: Vec<[usize; 2]> = (0..clips)
                    .map(|clip| {
                        let present = label_sets.iter().filter(|set| set[clip].get(code)).count();
                        [raters - present, present]
                    })
                    .collect();
                kappa.push((
                    code,
                    fleiss_kappa(&counts, raters).map_err(|e| e.to_string())?,
                ));
            }
        }
    }

    let confusion_table = if raters == 2 {
        Some(confusion(&label_sets[0], &label_sets[1]).map_err(|e| e.to_string())?)
    } else {
        None
    };

    let majority = if args.majority {
        let mut labels: Vec<ClipLabels> = (0..clips).map(ClipLabels::empty).collect();
        for code in EventCode::ALL {
            let vectors: Vec<Vec<bool>> = label_sets
                .iter()
                .map(|set| label_vector(set, code))
                .collect();
            let voted = majority_vote(&vectors).map_err(|e| e.to_string())?;
            for (clip, bit) in voted.into_iter().enumerate() {
                labels[clip].set(code, bit);
            }
        }
        Some(labels)
    } else {
        None
    };

    let report = AgreeReport {
        statistic: match metric {
            Metric::Cohen => "cohen_kappa",
            Metric::Fleiss => "fleiss_kappa",
        },
        raters,
        clips,
        kappa,
        confusion: confusion_table,
        majority,
    };
    print!("{}", render_agree(&report, format));
    Ok(0)
}
