use std::path::PathBuf;
use std::sync::Arc;

use clap::Args;
use nccalc::algebra::check_local_confluence;
use nccalc::calculus::{Calculus, Form};
use nccalc::files;
use nccalc::geometry::Geometry;
use nccalc::presets::{self, Preset};
use nccalc::{Error, NCPoly, Presentation};

use crate::CliError;

/// Where the algebra and calculus come from.
#[derive(Args, Debug, Clone, Default)]
pub struct Source {
    /// a catalog preset (see `preset list`)
    #[arg(long, conflicts_with = "file")]
    pub preset: Option<String>,
    /// a calculus or presentation file (TOML)
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// treat the calculus as simple when checking differentiability
    #[arg(long)]
    pub simple: bool,
}

pub struct Session {
    pub name: String,
    pub algebra: Arc<Presentation>,
    pub calc: Option<Arc<Calculus>>,
    pub images: Option<Vec<Vec<Form>>>,
    pub simple: bool,
    pub coords: Option<Vec<NCPoly>>,
    pub preset: Option<Preset>,
    pub side_conditions: Vec<String>,
}

pub fn env_side_conditions() -> Vec<String> {
    std::env::var("NCCALC_SIDE_CONDITIONS")
        .map(|v| {
            v.split(';')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect()
        })
        .unwrap_or_default()
}

pub fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

impl Session {
    pub fn from_preset(p: Preset) -> Self {
        let mut side = p.side_conditions().to_vec();
        side.extend(env_side_conditions());
        Session {
            name: p.id.to_string(),
            algebra: p.calc.spec.algebra.clone(),
            calc: Some(p.calc.clone()),
            images: p.images.clone(),
            simple: p.simple,
            coords: p.coords.clone(),
            preset: Some(p),
            side_conditions: side,
        }
    }

    pub fn load(src: &Source) -> Result<Self, CliError> {
        let mut s = match (&src.preset, &src.file) {
            (Some(id), _) => Session::from_preset(presets::load(id)?),
            (None, Some(path)) => {
                let text = read(path)?;
                let doc = files::parse_doc(&text)?;
                let name = path.display().to_string();
                let mut side = doc.params.side_conditions.clone();
                side.extend(env_side_conditions());
                let s = if doc.directions.is_none() {
                    Session {
                        name,
                        algebra: Arc::new(files::presentation_from_doc(&doc)?),
                        calc: None,
                        images: None,
                        simple: false,
                        coords: None,
                        preset: None,
                        side_conditions: side,
                    }
                } else {
                    let l = files::calculus_from_doc(&doc)?;
                    Session {
                        name,
                        algebra: l.calc.spec.algebra.clone(),
                        calc: Some(l.calc),
                        images: l.images,
                        simple: false,
                        coords: None,
                        preset: None,
                        side_conditions: side,
                    }
                };
                let conf = check_local_confluence(&s.algebra, 4);
                if let Some(f) = conf.failures.first() {
                    return Err(Error::internal(format!(
                        "rewrite system is not confluent: rules `{}` and `{}` disagree on {} ({} vs {})",
                        f.rules.0, f.rules.1, f.word, f.left, f.right
                    ))
                    .into());
                }
                s
            }
            (None, None) => return Err(CliError::Input("give --preset or --file".into())),
        };
        s.simple |= src.simple;
        Ok(s)
    }

    pub fn calc(&self) -> Result<&Arc<Calculus>, CliError> {
        self.calc
            .as_ref()
            .ok_or_else(|| CliError::Input(format!("{} defines no calculus", self.name)))
    }

    pub fn geometry(&self) -> Result<Geometry, CliError> {
        Ok(Geometry::new(self.calc()?.clone(), self.images.clone())?)
    }
}
