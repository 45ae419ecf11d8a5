//! Plain-text tilings: one line per row, one letter per cell naming the
//! side its partner lies on (`L`, `R`, `U`, `D`). The 2x2 board with two
//! horizontal dominoes is
//!
//! ```text
//! RL
//! RL
//! ```

use dimers::{GridSpec, Matching};

pub fn parse(text: &str) -> Result<Matching, String> {
    let rows: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    let m = rows.len();
    let n = rows.first().map_or(0, |r| r.chars().count());
    if m == 0 || n == 0 {
        return Err("empty tiling".into());
    }
    if m > u16::MAX as usize || n > u16::MAX as usize {
        return Err("tiling is too large for the code header".into());
    }
    let spec = GridSpec::rectangle(m, n);
    let mut partner = vec![0usize; m * n];
    for (y, row) in rows.iter().enumerate() {
        let letters: Vec<char> = row.chars().collect();
        if letters.len() != n {
            return Err(format!("row {} has {} cells, expected {n}", y + 1, letters.len()));
        }
        for (x, c) in letters.into_iter().enumerate() {
            let cell = y * n + x;
            let target = match c.to_ascii_uppercase() {
                'L' if x > 0 => cell - 1,
                'R' if x + 1 < n => cell + 1,
                'U' if y > 0 => cell - n,
                'D' if y + 1 < m => cell + n,
                'L' | 'R' | 'U' | 'D' => {
                    return Err(format!("cell ({}, {}) points off the board", x + 1, y + 1));
                }
                other => return Err(format!("unexpected character {other:?} at ({}, {})", x + 1, y + 1)),
            };
            partner[cell] = target;
        }
    }
    Matching::from_partners(spec, partner).map_err(|e| e.to_string())
}

pub fn render(matching: &Matching) -> Vec<String> {
    let spec = *matching.spec();
    (0..spec.rows)
        .map(|y| {
            (0..spec.cols)
                .map(|x| {
                    let cell = y * spec.cols + x;
                    let p = matching.partner(cell);
                    if p + 1 == cell {
                        'L'
                    } else if cell + 1 == p {
                        'R'
                    } else if p < cell {
                        'U'
                    } else {
                        'D'
                    }
                })
                .collect()
        })
        .collect()
}
