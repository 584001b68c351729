//! Random CUDA-like programs: well-bracketed, lexically valid, with
//! comments, directives, kernels and launches mixed in.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

const IDS: &[&str] = &["a", "b", "n", "d_x", "h_y", "NI", "count"];
const TYPES: &[&str] = &["int", "float", "size_t", "double"];
const OPS: &[&str] = &["+", "-", "*", "/", "<", "==", "&&", "<<", "%"];
const APIS: &[&str] = &[
    "cudaMalloc",
    "cudaFree",
    "cudaMemset",
    "cudaMemcpy",
    "cudaGetLastError",
];

fn pick<'a>(rng: &mut impl Rng, xs: &[&'a str]) -> &'a str {
    xs.choose(rng).unwrap()
}

fn expr(rng: &mut impl Rng, depth: u32) -> String {
    let leaf = depth == 0 || rng.gen_bool(0.4);
    if leaf {
        return match rng.gen_range(0..5) {
            0 => rng.gen_range(0..100).to_string(),
            1 => "1.5f".into(),
            2 => "\"s t\"".into(),
            3 => format!("sizeof({})", pick(rng, TYPES)),
            _ => pick(rng, IDS).into(),
        };
    }
    match rng.gen_range(0..4) {
        0 => format!(
            "{} {} {}",
            expr(rng, depth - 1),
            pick(rng, OPS),
            expr(rng, depth - 1)
        ),
        1 => format!("({})", expr(rng, depth - 1)),
        2 => format!("{}[{}]", pick(rng, IDS), expr(rng, depth - 1)),
        _ => format!("f({}, {})", expr(rng, depth - 1), expr(rng, depth - 1)),
    }
}

fn statement(rng: &mut impl Rng, depth: u32, indent: usize, out: &mut Vec<String>) {
    let pad = "    ".repeat(indent);
    let compound = depth > 0 && rng.gen_bool(0.25);
    if compound {
        let head = if rng.gen_bool(0.5) {
            format!("if ({})", expr(rng, 2))
        } else {
            let i = pick(rng, IDS);
            format!("for ({i} = 0; {i} < {}; {i}++)", expr(rng, 1))
        };
        out.push(format!("{pad}{head} {{"));
        for _ in 0..rng.gen_range(1..=3) {
            statement(rng, depth - 1, indent + 1, out);
        }
        out.push(format!("{pad}}}"));
        return;
    }
    let line = match rng.gen_range(0..7) {
        0 => format!("{} *{};", pick(rng, TYPES), pick(rng, IDS)),
        1 => format!(
            "{} {} = {};",
            pick(rng, TYPES),
            pick(rng, IDS),
            expr(rng, 2)
        ),
        2 => format!("{}({}, {});", pick(rng, APIS), expr(rng, 2), expr(rng, 1)),
        3 => format!("{} = {};", pick(rng, IDS), expr(rng, 3)),
        4 => format!(
            "kern<<<{}, {}>>>({}, {});",
            pick(rng, IDS),
            pick(rng, IDS),
            expr(rng, 1),
            expr(rng, 1)
        ),
        5 => format!(
            "{} += {}; // trailing {}",
            pick(rng, IDS),
            expr(rng, 1),
            pick(rng, IDS)
        ),
        _ => format!("// note {}", pick(rng, IDS)),
    };
    out.push(format!("{pad}{line}"));
}

pub fn program(rng: &mut impl Rng) -> String {
    let mut out = Vec::new();
    if rng.gen_bool(0.5) {
        out.push("#include <stdio.h>".to_string());
        out.push(format!("#define N {}", rng.gen_range(1..64)));
    }
    if rng.gen_bool(0.5) {
        out.push("/* kernel */".to_string());
        out.push("__global__ void kern(float *a, int n) {".to_string());
        out.push("    int i = blockIdx.x * blockDim.x + threadIdx.x;".to_string());
        for _ in 0..rng.gen_range(0..3) {
            statement(rng, 1, 1, &mut out);
        }
        out.push("}".to_string());
        out.push(String::new());
    }
    out.push("void host(float *a) {".to_string());
    for _ in 0..rng.gen_range(1..=8) {
        statement(rng, 2, 1, &mut out);
    }
    out.push("}".to_string());
    out.join("\n") + "\n"
}
