//! Slow reference implementations over plain strings.
#![allow(dead_code)]

use std::collections::HashMap;

pub const LETTERS: [char; 4] = ['a', 'A', 'b', 'B'];

pub fn inv(c: char) -> char {
    if c.is_ascii_lowercase() {
        c.to_ascii_uppercase()
    } else {
        c.to_ascii_lowercase()
    }
}

pub fn reduce(s: &str) -> String {
    let mut st: Vec<char> = Vec::new();
    for c in s.chars() {
        if st.last() == Some(&inv(c)) {
            st.pop();
        } else {
            st.push(c);
        }
    }
    st.into_iter().collect()
}

/// Display form, with `1` for the empty word.
pub fn show(s: &str) -> String {
    if s.is_empty() {
        "1".into()
    } else {
        s.into()
    }
}

pub fn inverse(s: &str) -> String {
    s.chars().rev().map(inv).collect()
}

pub fn comm(x: &str, y: &str) -> String {
    reduce(&format!("{}{}{}{}", x, y, inverse(x), inverse(y)))
}

pub fn all_reduced(len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &out {
            for c in LETTERS {
                if w.chars().last() != Some(inv(c)) {
                    next.push(format!("{w}{c}"));
                }
            }
        }
        out = next;
    }
    out
}

pub fn cyclically_reduced(s: &str) -> bool {
    match (s.chars().next(), s.chars().last()) {
        (Some(f), Some(l)) => s.len() < 2 || f != inv(l),
        _ => true,
    }
}

/// Magnus expansion truncated at `deg`: a -> 1+X, A -> 1-X+X^2-...
pub type Series = HashMap<Vec<u8>, i64>;

pub fn expand(s: &str, deg: usize) -> Series {
    let mut acc: Series = HashMap::from([(Vec::new(), 1)]);
    for c in s.chars() {
        let g = if c.eq_ignore_ascii_case(&'a') { 0u8 } else { 1u8 };
        let neg = c.is_ascii_uppercase();
        let mut next: Series = HashMap::new();
        for (m, coef) in &acc {
            *next.entry(m.clone()).or_default() += coef;
            let mut mono = m.clone();
            let mut sign = 1i64;
            while mono.len() < deg {
                mono.push(g);
                sign = if neg { -sign } else { 1 };
                *next.entry(mono.clone()).or_default() += coef * sign;
                if !neg {
                    break;
                }
            }
        }
        next.retain(|_, v| *v != 0);
        acc = next;
    }
    acc
}

/// Smallest positive degree with a nonzero coefficient, if any below `deg`.
pub fn depth(s: &str, deg: usize) -> Option<usize> {
    expand(s, deg).keys().map(Vec::len).filter(|&d| d > 0).min()
}

/// Membership in the second derived subgroup: the walk on the square lattice
/// closes up and crosses every edge as often forwards as backwards.
pub fn in_second_derived(s: &str) -> bool {
    let mut pos = (0i64, 0i64);
    let mut edges: HashMap<(i64, i64, bool), i64> = HashMap::new();
    for c in s.chars() {
        match c {
            'a' => {
                *edges.entry((pos.0, pos.1, true)).or_default() += 1;
                pos.0 += 1;
            }
            'A' => {
                pos.0 -= 1;
                *edges.entry((pos.0, pos.1, true)).or_default() -= 1;
            }
            'b' => {
                *edges.entry((pos.0, pos.1, false)).or_default() += 1;
                pos.1 += 1;
            }
            _ => {
                pos.1 -= 1;
                *edges.entry((pos.0, pos.1, false)).or_default() -= 1;
            }
        }
    }
    !s.is_empty() && pos == (0, 0) && edges.values().all(|&v| v == 0)
}
