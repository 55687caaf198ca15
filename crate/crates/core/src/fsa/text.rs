//! Plain-text DFA serialization.
//!
//! ```text
//! dfa <name>
//! alphabet <symbol> ...
//! states <n> start <s>
//! accept <s> ...
//! trans <from> <symbol> <to>
//! ```
//!
//! Anything after `#` on a line is ignored.

use std::fmt::Write as _;

use super::Dfa;
use crate::error::{Error, Result};
use crate::word::Letter;

impl Dfa {
    pub fn to_text(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "dfa {name}");
        let _ = writeln!(out, "alphabet {}", self.symbols.join(" "));
        let _ = writeln!(out, "states {} start {}", self.num_states(), self.start);
        let acc: Vec<String> = (0..self.num_states())
            .filter(|&s| self.accept[s])
            .map(|s| s.to_string())
            .collect();
        if acc.is_empty() {
            out.push_str("accept\n");
        } else {
            let _ = writeln!(out, "accept {}", acc.join(" "));
        }
        for (s, l, t) in self.transitions() {
            let _ = writeln!(out, "trans {s} {} {t}", self.symbols[l.index()]);
        }
        out
    }

    /// Parse the text format; returns the automaton name and the DFA.
    pub fn from_text(text: &str) -> Result<(String, Dfa)> {
        let err = |line: usize, message: String| Error::Parse {
            context: "dfa".into(),
            line,
            message,
        };
        let mut lines = text.lines().enumerate().filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("").trim();
            (!body.is_empty()).then(|| (i + 1, body.split_whitespace().collect::<Vec<_>>()))
        });
        let mut header = |want: &str| -> Result<(usize, Vec<&str>)> {
            match lines.next() {
                Some((n, toks)) if toks[0] == want => Ok((n, toks[1..].to_vec())),
                Some((n, toks)) => Err(err(n, format!("expected `{want}`, found `{}`", toks[0]))),
                None => Err(err(0, format!("missing `{want}` line"))),
            }
        };
        let (n, name) = header("dfa")?;
        if name.len() != 1 {
            return Err(err(n, "expected `dfa <name>`".into()));
        }
        let name = name[0].to_string();
        let (_, symbols) = header("alphabet")?;
        let symbols: Vec<String> = symbols.iter().map(|s| s.to_string()).collect();
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(err(2, format!("duplicate symbol `{s}`")));
            }
        }
        let (n, st) = header("states")?;
        let (states, start) = match st.as_slice() {
            [k, "start", s] => (
                k.parse::<usize>().map_err(|e| err(n, format!("bad state count: {e}")))?,
                s.parse::<usize>().map_err(|e| err(n, format!("bad start state: {e}")))?,
            ),
            _ => return Err(err(n, "expected `states <n> start <s>`".into())),
        };
        if states == 0 || start >= states {
            return Err(err(n, format!("start state {start} out of range")));
        }
        let state = |n: usize, tok: &str| -> Result<usize> {
            let s: usize = tok
                .parse()
                .map_err(|e| err(n, format!("bad state `{tok}`: {e}")))?;
            if s >= states {
                return Err(err(n, format!("state {s} out of range")));
            }
            Ok(s)
        };
        let (n, acc) = header("accept")?;
        let mut dfa = Dfa::new(symbols.clone(), states, start);
        for tok in acc {
            dfa.set_accepting(state(n, tok)?, true);
        }
        for (n, toks) in lines {
            match toks.as_slice() {
                ["trans", from, sym, to] => {
                    let a = symbols
                        .iter()
                        .position(|s| s == sym)
                        .ok_or_else(|| err(n, format!("unknown symbol `{sym}`")))?;
                    dfa.add_transition(state(n, from)?, Letter(a as u32), state(n, to)?)
                        .map_err(|e| err(n, e.to_string()))?;
                }
                _ => return Err(err(n, format!("expected `trans <from> <symbol> <to>`, found `{}`", toks.join(" ")))),
            }
        }
        Ok((name, dfa))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Alphabet;

    #[test]
    fn round_trip() {
        let al = Alphabet::new(&["a", "b"]).unwrap();
        let d = Dfa::from_words(super::super::symbols_of(&al), &[al.parse("a b").unwrap(), al.parse("b^-1").unwrap()]);
        let text = d.to_text("sample");
        assert!(text.starts_with("dfa sample\nalphabet a a^-1 b b^-1\n"));
        let (name, back) = Dfa::from_text(&text).unwrap();
        assert_eq!(name, "sample");
        assert_eq!(back, d);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\ndfa x\n\nalphabet a # one letter\nstates 2 start 0\naccept 1\ntrans 0 a 1\n";
        let (_, d) = Dfa::from_text(text).unwrap();
        assert!(d.accepts(&crate::word::Word::single(Letter(0))));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "dfa x\nalphabet a\nstates 2 start 0\naccept 1\ntrans 0 b 1\n";
        match Dfa::from_text(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("unexpected {other:?}"),
        }
        let text = "dfa x\nalphabet a\nstates 2 start 0\naccept 7\n";
        assert!(matches!(Dfa::from_text(text), Err(Error::Parse { line: 4, .. })));
    }
}
