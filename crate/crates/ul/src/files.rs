//! File-level parsing and printing.
//!
//! Every artifact file is an `(alphabet ...)` header followed by one body
//! form; the body's head names the logic.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::alphabet::{Alphabet, Letter};
use crate::duds::Duds;
use crate::ete::Ete;
use crate::po2dfa::Po2Dfa;
use crate::sexpr::{parse_sexprs, SExpr, SexprError};
use crate::tlfp::Tlfp;
use crate::tlrec::RecPsi;
use crate::tlxy::Tlxy;
use crate::uitlpm::Uitl;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LogicId {
    Po2dfa,
    Ete,
    Tlxy,
    Duds,
    Uitlpm,
    Tlfp,
    Tlrec,
}

impl LogicId {
    pub const ALL: [LogicId; 7] = [
        LogicId::Po2dfa,
        LogicId::Ete,
        LogicId::Tlxy,
        LogicId::Duds,
        LogicId::Uitlpm,
        LogicId::Tlfp,
        LogicId::Tlrec,
    ];
}

impl fmt::Display for LogicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LogicId::Po2dfa => "po2dfa",
            LogicId::Ete => "ete",
            LogicId::Tlxy => "tlxy",
            LogicId::Duds => "duds",
            LogicId::Uitlpm => "uitlpm",
            LogicId::Tlfp => "tlfp",
            LogicId::Tlrec => "tlrec",
        };
        write!(f, "{s}")
    }
}

impl FromStr for LogicId {
    type Err = String;

    fn from_str(s: &str) -> Result<LogicId, String> {
        match s {
            "po2dfa" => Ok(LogicId::Po2dfa),
            "ete" => Ok(LogicId::Ete),
            "tlxy" => Ok(LogicId::Tlxy),
            "duds" => Ok(LogicId::Duds),
            "uitlpm" => Ok(LogicId::Uitlpm),
            "tlfp" => Ok(LogicId::Tlfp),
            "tlrec" => Ok(LogicId::Tlrec),
            other => Err(format!("unknown logic {other}")),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Artifact {
    Po2dfa(Po2Dfa),
    Ete(Alphabet, Ete),
    Tlxy(Alphabet, Tlxy),
    Duds(Alphabet, Duds),
    Uitlpm(Alphabet, Uitl),
    Tlfp(Alphabet, Tlfp),
    Tlrec(Alphabet, RecPsi),
}

impl Artifact {
    pub fn logic(&self) -> LogicId {
        match self {
            Artifact::Po2dfa(_) => LogicId::Po2dfa,
            Artifact::Ete(..) => LogicId::Ete,
            Artifact::Tlxy(..) => LogicId::Tlxy,
            Artifact::Duds(..) => LogicId::Duds,
            Artifact::Uitlpm(..) => LogicId::Uitlpm,
            Artifact::Tlfp(..) => LogicId::Tlfp,
            Artifact::Tlrec(..) => LogicId::Tlrec,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        match self {
            Artifact::Po2dfa(m) => &m.alphabet,
            Artifact::Ete(sg, _)
            | Artifact::Tlxy(sg, _)
            | Artifact::Duds(sg, _)
            | Artifact::Uitlpm(sg, _)
            | Artifact::Tlfp(sg, _)
            | Artifact::Tlrec(sg, _) => sg,
        }
    }

    /// A size measure for translation reports: states for automata, node
    /// counts for formulas.
    pub fn size(&self) -> usize {
        match self {
            Artifact::Po2dfa(m) => m.state_count(),
            Artifact::Ete(_, e) => e.size(),
            Artifact::Tlxy(_, f) => crate::tlxy::size(f),
            Artifact::Duds(_, d) => d.node_count(),
            Artifact::Uitlpm(_, d) => crate::uitlpm::usize_of(d),
            Artifact::Tlfp(_, f) => crate::tlfp::size(f),
            Artifact::Tlrec(_, f) => crate::tlrec::psi_size(f),
        }
    }
}

#[derive(Debug, Error)]
pub enum FileError {
    #[error(transparent)]
    Sexpr(#[from] SexprError),
    #[error("{0}")]
    Malformed(String),
}

fn parse_alphabet(e: &SExpr) -> Result<Alphabet, FileError> {
    let items = e
        .as_list()
        .ok_or_else(|| FileError::Malformed("expected (alphabet ...)".into()))?;
    if items.first().and_then(SExpr::as_atom) != Some("alphabet") {
        return Err(FileError::Malformed("file must begin with (alphabet ...)".into()));
    }
    let mut letters = Vec::new();
    for item in &items[1..] {
        let tok = item
            .as_atom()
            .ok_or_else(|| FileError::Malformed("alphabet entries must be atoms".into()))?;
        let mut chars = tok.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => letters.push(
                Letter::new(c).map_err(|e| FileError::Malformed(e.to_string()))?,
            ),
            _ => {
                return Err(FileError::Malformed(format!(
                    "alphabet letters are single characters, got {tok:?}"
                )))
            }
        }
    }
    Alphabet::new(letters).map_err(|e| FileError::Malformed(e.to_string()))
}

pub fn parse_file(text: &str) -> Result<Artifact, FileError> {
    let forms = parse_sexprs(text)?;
    if forms.len() != 2 {
        return Err(FileError::Malformed(format!(
            "expected an alphabet header and one body form, found {} forms",
            forms.len()
        )));
    }
    let sg = parse_alphabet(&forms[0])?;
    let body = &forms[1];
    let head = body
        .as_list()
        .and_then(|items| items.first())
        .and_then(SExpr::as_atom)
        .ok_or_else(|| FileError::Malformed("body must be a headed list".into()))?;
    let wrap = |e: Result<Artifact, String>| e.map_err(FileError::Malformed);
    match head {
        "po2dfa" => wrap(Po2Dfa::from_sexpr(body, &sg).map(Artifact::Po2dfa)),
        "ete" => {
            let items = body.as_list().unwrap();
            if items.len() != 2 {
                return Err(FileError::Malformed("expected (ete <body>)".into()));
            }
            wrap(crate::ete::from_sexpr(&items[1], &sg).map(|e| Artifact::Ete(sg.clone(), e)))
        }
        "tlxy" => {
            let items = body.as_list().unwrap();
            if items.len() != 2 {
                return Err(FileError::Malformed("expected (tlxy <body>)".into()));
            }
            wrap(crate::tlxy::from_sexpr(&items[1], &sg).map(|f| Artifact::Tlxy(sg.clone(), f)))
        }
        "duds" => wrap(Duds::from_sexpr(body, &sg).map(|d| Artifact::Duds(sg.clone(), d))),
        "uitlpm" => {
            let items = body.as_list().unwrap();
            if items.len() != 2 {
                return Err(FileError::Malformed("expected (uitlpm <body>)".into()));
            }
            wrap(crate::uitlpm::from_sexpr(&items[1], &sg).map(|d| Artifact::Uitlpm(sg.clone(), d)))
        }
        "tlfp" => {
            let items = body.as_list().unwrap();
            if items.len() != 2 {
                return Err(FileError::Malformed("expected (tlfp <body>)".into()));
            }
            wrap(crate::tlfp::from_sexpr(&items[1], &sg).map(|f| Artifact::Tlfp(sg.clone(), f)))
        }
        "tlrec" => {
            let items = body.as_list().unwrap();
            if items.len() != 2 {
                return Err(FileError::Malformed("expected (tlrec <body>)".into()));
            }
            wrap(crate::tlrec::from_sexpr(&items[1], &sg).map(|f| Artifact::Tlrec(sg.clone(), f)))
        }
        other => Err(FileError::Malformed(format!("unknown body form {other}"))),
    }
}

pub fn print_file(artifact: &Artifact) -> String {
    let header = artifact.alphabet().to_string();
    let body = match artifact {
        Artifact::Po2dfa(m) => m.to_sexpr().to_string(),
        Artifact::Ete(_, e) => format!("(ete {})", crate::ete::to_sexpr(e)),
        Artifact::Tlxy(_, f) => format!("(tlxy {})", crate::tlxy::to_sexpr(f)),
        Artifact::Duds(_, d) => d.to_sexpr().to_string(),
        Artifact::Uitlpm(_, d) => format!("(uitlpm {})", crate::uitlpm::to_sexpr(d)),
        Artifact::Tlfp(_, f) => format!("(tlfp {})", crate::tlfp::to_sexpr(f)),
        Artifact::Tlrec(_, f) => format!("(tlrec {})", crate::tlrec::to_sexpr(f)),
    };
    format!("{header}\n{body}\n")
}

/// Language membership of a word under any artifact.
pub fn member(artifact: &Artifact, w: &crate::alphabet::Word) -> bool {
    match artifact {
        Artifact::Po2dfa(m) => m.member(w),
        Artifact::Ete(sg, e) => crate::ete::compile_ete(e, sg).member(w),
        Artifact::Tlxy(_, f) => crate::tlxy::member(f, w),
        Artifact::Duds(_, d) => d.member(w),
        Artifact::Uitlpm(_, d) => crate::uitlpm::member(d, w),
        Artifact::Tlfp(_, f) => crate::tlfp::member(f, w),
        Artifact::Tlrec(_, f) => crate::tlrec::member(f, w),
    }
}
