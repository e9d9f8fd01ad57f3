//! Recomputation of the published level and index tables.

use arithlevel::families;
use arithlevel::level::{analyze, AnalyzeOptions};
use arithlevel::{Config, GroupSpec};
use num_bigint::BigUint;
use serde::Serialize;

use crate::report::factored;

type Factors = &'static [(u64, u32)];

fn value(f: Factors) -> BigUint {
    f.iter().map(|&(p, e)| BigUint::from(p).pow(e)).product()
}

/// Published `(T, level, index of beta_T(G))`.
pub const TABLE1: [(i64, Factors, Factors); 23] = [
    (-1, &[(11, 1)], &[(7, 1), (19, 1)]),
    (-2, &[(2, 6)], &[(2, 19), (7, 1)]),
    (1, &[(5, 1)], &[(31, 1)]),
    (2, &[(2, 5)], &[(2, 17), (7, 1)]),
    (
        3,
        &[(3, 3), (73, 1)],
        &[(2, 3), (3, 11), (13, 1), (1801, 1)],
    ),
    (4, &[(2, 7), (23, 1)], &[(2, 31), (7, 2), (79, 1)]),
    (
        5,
        &[(5, 3), (367, 1)],
        &[(2, 4), (3, 2), (5, 10), (13, 1), (31, 1), (3463, 1)],
    ),
    (
        6,
        &[(2, 8), (3, 3), (5, 1)],
        &[(2, 29), (3, 10), (7, 1), (13, 1), (31, 1)],
    ),
    (
        7,
        &[(7, 3), (1021, 1)],
        &[(2, 5), (3, 4), (5, 1), (7, 10), (19, 1), (347821, 1)],
    ),
    (
        8,
        &[(2, 10), (191, 1)],
        &[(2, 46), (7, 2), (13, 2), (31, 1)],
    ),
    (
        9,
        &[(3, 6), (2179, 1)],
        &[(2, 3), (3, 27), (7, 1), (13, 1), (226201, 1)],
    ),
    (
        10,
        &[(2, 5), (5, 3), (11, 1), (17, 1)],
        &[(2, 26), (3, 1), (5, 10), (7, 2), (19, 1), (31, 1), (307, 1)],
    ),
    (
        11,
        &[(5, 1), (11, 3), (797, 1)],
        &[
            (2, 4),
            (5, 2),
            (7, 1),
            (11, 10),
            (19, 1),
            (31, 1),
            (157, 1),
            (4051, 1),
        ],
    ),
    (
        12,
        &[(2, 7), (3, 3), (647, 1)],
        &[(2, 35), (3, 10), (7, 1), (13, 1), (211, 1), (1987, 1)],
    ),
    (
        13,
        &[(13, 3), (29, 1), (227, 1)],
        &[
            (2, 4),
            (3, 2),
            (7, 1),
            (13, 11),
            (61, 1),
            (67, 1),
            (73, 1),
            (709, 1),
        ],
    ),
    (
        14,
        &[(2, 6), (7, 3), (257, 1)],
        &[(2, 28), (3, 3), (7, 11), (19, 1), (61, 1), (1087, 1)],
    ),
    (
        15,
        &[(3, 3), (5, 3), (67, 1), (151, 1)],
        &[
            (2, 9),
            (3, 14),
            (5, 10),
            (7, 3),
            (13, 1),
            (31, 2),
            (1093, 1),
        ],
    ),
    (
        16,
        &[(2, 13), (5, 1), (307, 1)],
        &[(2, 63), (3, 3), (7, 1), (31, 1), (43, 1), (733, 1)],
    ),
    (
        18,
        &[(2, 5), (3, 6), (1093, 1)],
        &[(2, 23), (3, 27), (7, 1), (13, 2), (398581, 1)],
    ),
    (
        19,
        &[(19, 3), (67, 1), (307, 1)],
        &[
            (2, 4),
            (3, 9),
            (5, 1),
            (7, 2),
            (19, 10),
            (31, 1),
            (43, 1),
            (127, 1),
            (733, 1),
        ],
    ),
    (
        20,
        &[(2, 7), (5, 3), (2999, 1)],
        &[
            (2, 36),
            (3, 1),
            (5, 10),
            (7, 1),
            (13, 1),
            (31, 1),
            (613, 1),
            (1129, 1),
        ],
    ),
    (
        50,
        &[(2, 5), (5, 6), (23, 1), (1019, 1)],
        &[
            (2, 24),
            (3, 1),
            (5, 25),
            (7, 3),
            (31, 1),
            (79, 1),
            (148483, 1),
        ],
    ),
    (
        100,
        &[(2, 7), (5, 6), (29, 1), (67, 1), (193, 1)],
        &[
            (2, 42),
            (3, 5),
            (5, 25),
            (7, 4),
            (13, 1),
            (31, 2),
            (67, 1),
            (1783, 1),
        ],
    ),
];

/// Published `(k, level, index of rho_k(G), index of rho_k(F))`.
pub const TABLE2: [(i64, Factors, Factors, Factors); 5] = [
    (
        0,
        &[(11, 1)],
        &[(7, 1), (19, 1)],
        &[(2, 1), (5, 1), (7, 1), (19, 1)],
    ),
    (
        2,
        &[(2, 2), (5, 1), (7, 1)],
        &[(2, 12), (3, 2), (5, 1), (7, 2), (19, 1), (31, 1)],
        &[(2, 12), (3, 3), (5, 1), (7, 2), (19, 1), (31, 1)],
    ),
    (
        3,
        &[(13, 1)],
        &[(2, 2), (3, 1), (13, 2), (61, 1)],
        &[(2, 3), (3, 2), (13, 2), (61, 1)],
    ),
    (
        4,
        &[(3, 3), (7, 1)],
        &[(2, 4), (3, 11), (7, 2), (13, 1), (19, 1)],
        &[(2, 6), (3, 13), (7, 2), (13, 1), (19, 1)],
    ),
    (
        5,
        &[(2, 2), (19, 1), (31, 1)],
        &[(2, 10), (3, 3), (5, 1), (31, 2), (127, 1), (331, 1)],
        &[(2, 11), (3, 5), (5, 1), (31, 2), (127, 1), (331, 1)],
    ),
];

/// Published `((d, k), level, index of G(d, k), index of Ghat(d, gcd(d, k)))`.
pub const TABLE3: [((i64, i64), Factors, Factors, Factors); 14] = [
    ((1, 3), &[(2, 1)], &[(2, 1), (3, 1)], &[]),
    ((1, 2), &[(2, 1)], &[(2, 1), (5, 1)], &[]),
    (
        (2, 3),
        &[(2, 3)],
        &[(2, 6), (3, 1), (5, 1)],
        &[(3, 1), (5, 1)],
    ),
    (
        (3, 4),
        &[(2, 2), (3, 2)],
        &[(2, 9), (3, 5), (5, 2)],
        &[(2, 4), (5, 1)],
    ),
    (
        (4, 4),
        &[(2, 6)],
        &[(2, 20), (3, 2), (5, 1)],
        &[(2, 6), (3, 2), (5, 1)],
    ),
    (
        (6, 5),
        &[(2, 3), (3, 2)],
        &[(2, 10), (3, 6), (5, 2)],
        &[(2, 4), (3, 1), (5, 2)],
    ),
    (
        (9, 6),
        &[(2, 1), (3, 5)],
        &[(2, 8), (3, 14), (5, 2)],
        &[(2, 7), (3, 4), (5, 1)],
    ),
    (
        (5, 5),
        &[(2, 1), (5, 3)],
        &[(2, 8), (3, 3), (5, 8), (13, 1)],
        &[(2, 7), (3, 2), (13, 1)],
    ),
    (
        (2, 4),
        &[(2, 4)],
        &[(2, 11), (3, 2), (5, 1)],
        &[(3, 2), (5, 1)],
    ),
    ((1, 4), &[(2, 2)], &[(2, 5), (5, 1)], &[]),
    (
        (16, 8),
        &[(2, 10)],
        &[(2, 40), (3, 2), (5, 1)],
        &[(2, 16), (3, 2), (5, 1)],
    ),
    (
        (12, 7),
        &[(2, 5), (3, 2)],
        &[(2, 17), (3, 6), (5, 2)],
        &[(2, 8), (3, 1), (5, 2)],
    ),
    (
        (8, 6),
        &[(2, 7)],
        &[(2, 24), (3, 2), (5, 1)],
        &[(2, 8), (3, 2), (5, 1)],
    ),
    (
        (4, 5),
        &[(2, 5)],
        &[(2, 13), (3, 1), (5, 1)],
        &[(2, 4), (3, 1), (5, 1)],
    ),
];

/// Largest `p^n` over the primes of a published level for which a row is
/// recomputed by default.
pub const ENVELOPE: u64 = 1_000_000;

fn in_envelope(level: Factors, n: u32, budget: u64) -> bool {
    let cap = budget.min(ENVELOPE);
    level
        .iter()
        .all(|&(p, _)| p.checked_pow(n).is_some_and(|x| x <= cap))
}

#[derive(Clone, Debug, Serialize)]
pub struct Cell {
    pub name: String,
    pub published: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub computed: Option<String>,
    /// `PASS`, `FAIL`, `SKIPPED(envelope)` or `ERROR(...)`.
    pub status: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub row: String,
    pub cells: Vec<Cell>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub table: u8,
    pub group: &'static str,
    pub rows: Vec<Row>,
}

impl TableReport {
    pub fn all_pass(&self) -> bool {
        self.rows
            .iter()
            .flat_map(|r| &r.cells)
            .all(|c| c.status == "PASS" || c.status.starts_with("SKIPPED"))
    }

    pub fn human(&self) -> String {
        let mut s = format!("table {} ({})\n", self.table, self.group);
        for r in &self.rows {
            for c in &r.cells {
                s.push_str(&format!(
                    "{:<10} {:<10} published {:<40} computed {:<40} {}\n",
                    r.row,
                    c.name,
                    c.published,
                    c.computed.as_deref().unwrap_or("-"),
                    c.status
                ));
            }
            if let Some(n) = &r.note {
                s.push_str(&format!("{:<10} note: {n}\n", r.row));
            }
        }
        s
    }
}

fn compare(name: &str, published: &BigUint, computed: Option<&BigUint>) -> Cell {
    let status = match computed {
        Some(c) if c == published => "PASS",
        Some(_) => "FAIL",
        None => "SKIPPED(envelope)",
    };
    Cell {
        name: name.into(),
        published: factored(published),
        computed: computed.map(factored),
        status: status.into(),
    }
}

fn error_cell(name: &str, published: &BigUint, e: &dyn std::fmt::Display) -> Cell {
    Cell {
        name: name.into(),
        published: factored(published),
        computed: None,
        status: format!("ERROR({e})"),
    }
}

/// Level and index cells for one group.
fn level_cells(
    spec: arithlevel::Result<GroupSpec>,
    level: &BigUint,
    index: &BigUint,
    index_name: &str,
    config: &Config,
    opts: &AnalyzeOptions,
) -> (Vec<Cell>, Option<String>) {
    match spec.and_then(|s| analyze(&s, config, opts)) {
        Ok(r) => {
            let note = r
                .found_transvection
                .as_ref()
                .map(|w| format!("transvection found by search: {w}"));
            (
                vec![
                    compare("level", level, Some(&BigUint::from(r.level))),
                    compare(index_name, index, Some(&r.index)),
                ],
                note,
            )
        }
        Err(e) => (
            vec![
                error_cell("level", level, &e),
                error_cell(index_name, index, &e),
            ],
            None,
        ),
    }
}

fn skipped(cells: &[(&str, &BigUint)]) -> Vec<Cell> {
    cells.iter().map(|(n, v)| compare(n, v, None)).collect()
}

pub struct Selection<'a> {
    /// Row labels to compute; `None` computes every row in the envelope.
    pub rows: Option<&'a [String]>,
    /// Compute selected rows even outside the envelope.
    pub force: bool,
}

impl Selection<'_> {
    fn wants(&self, label: &str, inside: bool) -> bool {
        match self.rows {
            Some(r) => r.iter().any(|x| x == label) && (inside || self.force),
            None => inside,
        }
    }
}

fn map_rows<T: Sync, F>(items: &[T], jobs: usize, f: F) -> Vec<Row>
where
    F: Fn(&T) -> Row + Sync + Send,
{
    if jobs <= 1 {
        return items.iter().map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    pool.install(|| {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    })
}

pub fn table1(sel: &Selection<'_>, config: &Config, jobs: usize) -> TableReport {
    let opts = AnalyzeOptions::default();
    let rows = map_rows(&TABLE1, jobs, |&(t, level_f, index)| {
        let label = t.to_string();
        let (level, index) = (value(level_f), value(index));
        let inside = in_envelope(level_f, 3, config.orbit_budget);
        if !sel.wants(&label, inside) {
            return Row {
                row: label,
                cells: skipped(&[("level", &level), ("index", &index)]),
                note: None,
            };
        }
        let (cells, note) = level_cells(
            families::beta(t, true),
            &level,
            &index,
            "index",
            config,
            &opts,
        );
        Row {
            row: label,
            cells,
            note,
        }
    });
    TableReport {
        table: 1,
        group: "beta_T(G) = <X_T, Y_T, Z_T>",
        rows,
    }
}

pub fn table2(sel: &Selection<'_>, config: &Config, jobs: usize) -> TableReport {
    let opts = AnalyzeOptions::default();
    let rows = map_rows(&TABLE2, jobs, |&(k, level_f, ig, if_)| {
        let label = k.to_string();
        let (level, ig, if_) = (value(level_f), value(ig), value(if_));
        let inside = in_envelope(level_f, 3, config.orbit_budget);
        if !sel.wants(&label, inside) {
            return Row {
                row: label,
                cells: skipped(&[("level", &level), ("index G", &ig), ("index F", &if_)]),
                note: None,
            };
        }
        // a transvection of rho_k(F) also lies in rho_k(G)
        let f = families::rho(k, false);
        let found = f.as_ref().ok().and_then(|s| {
            arithlevel::density::find_transvection(s, opts.find_depth)
                .map(arithlevel::Transvection::Word)
        });
        let Some(tv) = found else {
            let e = arithlevel::Error::NoTransvectionFound;
            return Row {
                row: label,
                cells: vec![
                    error_cell("level", &level, &e),
                    error_cell("index G", &ig, &e),
                    error_cell("index F", &if_, &e),
                ],
                note: None,
            };
        };
        let note = match &tv {
            arithlevel::Transvection::Word(w) => Some(format!("transvection found by search: {w}")),
            _ => None,
        };
        let g = families::rho(k, true).and_then(|s| s.with_transvection(tv.clone()));
        let f = f.and_then(|s| s.with_transvection(tv));
        let (mut cells, _) = level_cells(g, &level, &ig, "index G", config, &opts);
        let (fcells, _) = level_cells(f, &level, &if_, "index F", config, &opts);
        cells.push(fcells[1].clone());
        Row {
            row: label,
            cells,
            note,
        }
    });
    TableReport {
        table: 2,
        group: "rho_k(G) = <x, y, z> and rho_k(F) = <x, y>",
        rows,
    }
}

pub fn table3(sel: &Selection<'_>, config: &Config, jobs: usize) -> TableReport {
    let opts = AnalyzeOptions::default();
    let rows = map_rows(&TABLE3, jobs, |&((d, k), level_f, ig, ihat)| {
        let label = format!("({d},{k})");
        let (level, ig, ihat) = (value(level_f), value(ig), value(ihat));
        let d2 = gcd(d, k);
        let hat = match families::hat_g_index(d as u64, d2 as u64) {
            Ok(v) => compare("index Ghat", &ihat, Some(&v)),
            Err(e) => error_cell("index Ghat", &ihat, &e),
        };
        let inside = in_envelope(level_f, 4, config.orbit_budget);
        let (mut cells, note) = if sel.wants(&label, inside) {
            level_cells(
                families::hypergeometric(d, k),
                &level,
                &ig,
                "index G",
                config,
                &opts,
            )
        } else {
            (skipped(&[("level", &level), ("index G", &ig)]), None)
        };
        cells.push(hat);
        Row {
            row: label,
            cells,
            note,
        }
    });
    TableReport {
        table: 3,
        group: "G(d, k) = <U, T> in Sp(4, Z)",
        rows,
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
