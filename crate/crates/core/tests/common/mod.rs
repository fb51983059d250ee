#![allow(dead_code)]

use proptest::prelude::*;

use smallcut::generators::{random_connected, random_two_edge_connected};
use smallcut::graph::Graph;

/// Connected graphs with `min_n..=max_n` vertices and a random edge density.
pub fn connected(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n, 0.0f64..1.0, any::<u64>()).prop_map(|(n, density, seed)| {
        let max = n * (n - 1) / 2;
        let m = (n - 1) + ((max + 1 - n) as f64 * density * density) as usize;
        random_connected(n, m.min(max), seed).expect("valid shape")
    })
}

/// Bridgeless connected graphs on `min_n..=max_n` vertices (`min_n >= 3`).
pub fn bridgeless(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n, 0.0f64..1.0, any::<u64>()).prop_map(|(n, density, seed)| {
        let max = n * (n - 1) / 2;
        let m = n + ((max - n) as f64 * density * density) as usize;
        random_two_edge_connected(n, m.min(max), seed).expect("valid shape")
    })
}
