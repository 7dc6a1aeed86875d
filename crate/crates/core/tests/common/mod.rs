#![allow(dead_code)]

use std::collections::HashMap;

use canex_core::count::stam_table;
use canex_core::experiment::DEFAULT_SEED;
use canex_core::oracle::{chi_square, enumerate_canonical, enumerate_growth_strings, enumerate_shapes};
use canex_core::randgen::{random_canonical, random_partition, random_tree, RngState};

// chi-square quantiles at 0.999, keyed by degrees of freedom
pub fn critical(df: usize) -> f64 {
    match df {
        1 => 10.828,
        4 => 18.467,
        9 => 27.877,
        13 => 34.528,
        14 => 36.123,
        74 => 117.346,
        _ => panic!("no critical value for {df} degrees of freedom"),
    }
}

pub fn statistic(categories: &[String], draws: u64, mut draw: impl FnMut(u64) -> String) -> (f64, usize) {
    let mut seen: HashMap<String, u64> = categories.iter().map(|c| (c.clone(), 0)).collect();
    for i in 0..draws {
        let key = draw(i);
        *seen.get_mut(&key).unwrap_or_else(|| panic!("{key} is not a category")) += 1;
    }
    let observed: Vec<u64> = categories.iter().map(|c| seen[c]).collect();
    let expected = vec![draws as f64 / categories.len() as f64; categories.len()];
    (chi_square(&observed, &expected).unwrap(), categories.len() - 1)
}

pub fn tree_statistic(n: usize, draws: u64) -> (f64, usize) {
    let shapes: Vec<String> = enumerate_shapes(n).iter().map(|t| t.to_paren_string()).collect();
    statistic(&shapes, draws, |i| {
        random_tree(&mut RngState::for_sample(DEFAULT_SEED, i), n).to_paren_string()
    })
}

pub fn partition_statistic(n: usize, draws: u64) -> (f64, usize) {
    let table = stam_table(n);
    let strings: Vec<String> = enumerate_growth_strings(n).iter().map(|g| format!("{:?}", g.as_slice())).collect();
    statistic(&strings, draws, |i| {
        let g = random_partition(&mut RngState::for_sample(DEFAULT_SEED, i), &table).to_growth_string();
        format!("{:?}", g.as_slice())
    })
}

pub fn joint_statistic(n: usize, draws: u64) -> (f64, usize) {
    let table = stam_table(n);
    let all: Vec<String> = enumerate_canonical(n).unwrap().map(|c| c.render()).collect();
    statistic(&all, draws, |i| {
        random_canonical(&mut RngState::for_sample(DEFAULT_SEED, i), n, &table).render()
    })
}
