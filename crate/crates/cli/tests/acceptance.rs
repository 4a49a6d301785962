//! Acceptance suite: one PASS/FAIL line per gated criterion, followed by an
//! informational benchmark section. Exits non-zero if any gated criterion
//! fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use merbit_cli::commands::{bench_records, sweep_records};
use merbit_cli::io::{read_records, write_records};
use merbit_cli::{BenchRecord, Format, KernelOpts, PrecisionArg, TimingOpts, SCHEMA_VERSION};
use merbit_core::baseline::{speedup, spmv_merge_runtime, spmv_merge_runtime_into, throughput};
use merbit_core::fixtures::{
    example_matrix, laplacian_2d, random_matrix, random_vector, strongly_connected_graph, Structure,
};
use merbit_core::format::{
    generate_tile, long_row_fraction, metadata_footprint, pack_descriptor, reconstruct_path, unpack_descriptor,
    LONG_ROW_MARK,
};
use merbit_core::kernel::{spmv_merbit_stats, KernelStats};
use merbit_core::merge_path::{merge_search, sequential_path};
use merbit_core::solvers::{
    bicgstab, build_transition, pagerank, BicgstabConfig, KernelKind, PageRankConfig, SolverStatus,
};
use merbit_core::sparse::spmv_csr_reference;
use merbit_core::{CooTriples, CsrMatrix, DualBuffer, LaneFields, Scalar, SimtConfig, TileMetadata};

const FUZZ_MATRICES: usize = 504;
const FUZZ_CONFIGS: [(u32, u32); 3] = [(32, 14), (32, 7), (4, 4)];
const BLOCK_WARPS: [u32; 3] = [1, 8, 32];

type Outcome = Result<String, String>;
type Check<'a> = Box<dyn FnOnce() -> Outcome + 'a>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ceil_log2(v: u64) -> u32 {
    let mut b = 0;
    while (1u64 << b) < v {
        b += 1;
    }
    b
}

/// Lattice points of the walk, built from row lengths alone.
fn walk_points(offsets: &[usize]) -> Vec<(usize, usize)> {
    let mut pts = vec![(0, 0)];
    let (mut x, mut y) = (0, 0);
    for r in 0..offsets.len() - 1 {
        for _ in offsets[r]..offsets[r + 1] {
            x += 1;
            pts.push((x, y));
        }
        y += 1;
        pts.push((x, y));
    }
    pts
}

/// `4 eps * rownnz * max|v| * max|x|` for every row.
fn bounds<T: Scalar>(a: &CsrMatrix<T>, x: &[T]) -> Vec<f64> {
    let max_v = a.values().iter().fold(0.0f64, |m, v| m.max(v.as_f64().abs()));
    let max_x = x.iter().fold(0.0f64, |m, v| m.max(v.as_f64().abs()));
    let eps = T::epsilon().as_f64();
    (0..a.n_rows())
        .map(|r| 4.0 * eps * (a.row_offsets()[r + 1] - a.row_offsets()[r]) as f64 * max_v * max_x)
        .collect()
}

fn first_violation<T: Scalar>(got: &[T], want: &[T], bound: &[f64]) -> Option<usize> {
    (0..want.len()).find(|&r| {
        let diff = (got[r].as_f64() - want[r].as_f64()).abs();
        diff.is_nan() || diff > bound[r]
    })
}

fn fuzz_matrix(i: usize, rng: &mut ChaCha8Rng) -> CsrMatrix<f64> {
    let kind = Structure::ALL[i % Structure::ALL.len()];
    let n_rows = rng.gen_range(1..=512);
    let n_cols = rng.gen_range(1..=512);
    let mut target = (rng.gen::<f64>() * 19000f64.ln()).exp() as usize;
    loop {
        let a = random_matrix::<f64>(kind, n_rows, n_cols, target, 1000 + i as u64);
        if a.nnz() <= 20000 {
            return a;
        }
        target /= 2;
    }
}

#[derive(Default)]
struct Fuzz {
    matrices: usize,
    with_empty_rows: usize,
    with_dense_row: usize,
    runs: usize,
    agreement: Vec<String>,
    path: Vec<String>,
    diagonals_checked: usize,
    small_matrices: usize,
    search: Vec<String>,
    steps: Vec<String>,
    bounds: Vec<String>,
    worst: KernelStats,
    elapsed: Duration,
}

/// Down bits and Right steps summed over every lane descriptor.
fn descriptor_step_counts(t: &TileMetadata) -> (usize, usize) {
    let mut downs = 0;
    let mut total = 0;
    for j in 0..t.lane_num() {
        let len = t.lane_nnz(j);
        downs += (t.lane_fields(j).bit_flag & ((1u64 << len) - 1) as u32).count_ones() as usize;
        total += len;
    }
    (downs, total - downs)
}

fn fuzz_one<T: Scalar>(i: usize, a64: &CsrMatrix<f64>, f: &mut Fuzz) {
    let a: CsrMatrix<T> = a64.cast();
    let x: Vec<T> = random_vector(a.n_cols(), -1.0, 1.0, 5000 + i as u64);
    let want = spmv_csr_reference(&a, &x).unwrap();
    let bound = bounds(&a, &x);
    for (k, &(w, s)) in FUZZ_CONFIGS.iter().enumerate() {
        let c = SimtConfig::new(w, s, w * BLOCK_WARPS[(i + k) % BLOCK_WARPS.len()]).unwrap();
        let t = generate_tile(&a, &c).unwrap();
        let mut d = DualBuffer::new(a.n_rows());
        let stats = spmv_merbit_stats(&t, &a, &x, &mut d, &c).unwrap();
        let merge = spmv_merge_runtime(&a, &x, &c).unwrap();
        f.runs += 1;
        let tag = || format!("matrix {i} {} {c}", T::PRECISION);
        if let Some(r) = first_violation(d.output(), &want, &bound) {
            f.agreement.push(format!("{}: merbit row {r}", tag()));
        }
        if let Some(r) = first_violation(&merge, &want, &bound) {
            f.agreement.push(format!("{}: merge row {r}", tag()));
        }
        if stats.max_scratch_used > (c.block_size() * c.sigma()) as usize + 1
            || stats.max_lane_steps > s as usize
            || stats.max_tile_steps > (w * s) as usize
        {
            f.bounds.push(format!("{}: {stats:?}", tag()));
        }
        f.worst.max_scratch_used = f.worst.max_scratch_used.max(stats.max_scratch_used);
        f.worst.max_lane_steps = f.worst.max_lane_steps.max(stats.max_lane_steps);
        f.worst.max_tile_steps = f.worst.max_tile_steps.max(stats.max_tile_steps);
        let (downs, rights) = descriptor_step_counts(&t);
        if (downs, rights) != (a.n_rows(), a.nnz()) {
            f.steps.push(format!("{}: {downs} downs, {rights} rights", tag()));
        }
        if T::PRECISION == merbit_core::Precision::Double {
            match reconstruct_path(&t, &c, a.nnz(), a.n_rows()) {
                Ok(p) if p == sequential_path(a.row_offsets()) => {}
                _ => f.path.push(tag()),
            }
        }
    }
}

fn run_fuzz() -> Fuzz {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d65_7262);
    let mut f = Fuzz::default();
    for i in 0..FUZZ_MATRICES {
        let a = fuzz_matrix(i, &mut rng);
        f.matrices += 1;
        let lens: Vec<usize> = a.row_offsets().windows(2).map(|w| w[1] - w[0]).collect();
        f.with_empty_rows += usize::from(lens.contains(&0));
        f.with_dense_row += usize::from(a.n_rows() > 1 && lens.iter().any(|&l| l == a.n_cols() && l > 1));
        fuzz_one::<f32>(i, &a, &mut f);
        fuzz_one::<f64>(i, &a, &mut f);

        let (m, n) = (a.nnz(), a.n_rows());
        if m + n <= 2000 {
            f.small_matrices += 1;
            for (diag, &(x, y)) in walk_points(a.row_offsets()).iter().enumerate() {
                let p = merge_search(a.row_offsets(), diag, n, m).unwrap();
                f.diagonals_checked += 1;
                if (p.x, p.y) != (x, y) {
                    f.search.push(format!("matrix {i} diag {diag}"));
                }
            }
        }
    }
    f.elapsed = start.elapsed();
    f
}

fn summarize(errors: &[String]) -> String {
    format!("{} failures, first: {}", errors.len(), errors.first().map(String::as_str).unwrap_or(""))
}

fn criterion_1(f: &Fuzz) -> Outcome {
    ensure(f.matrices >= 500 && f.runs == f.matrices * 2 * FUZZ_CONFIGS.len(), || {
        format!("only {} matrices / {} runs", f.matrices, f.runs)
    })?;
    ensure(f.with_empty_rows > 0 && f.with_dense_row > 0, || "fuzz corpus lacks empty or dense rows".into())?;
    ensure(f.agreement.is_empty(), || summarize(&f.agreement))?;
    ensure(f.elapsed < Duration::from_secs(300), || format!("took {:?}", f.elapsed))?;
    Ok(format!(
        "{} matrices ({} with empty rows, {} with a dense row), {} kernel runs, all within bound, {:.1?}",
        f.matrices, f.with_empty_rows, f.with_dense_row, f.runs, f.elapsed
    ))
}

fn criterion_2(f: &Fuzz) -> Outcome {
    ensure(f.path.is_empty(), || summarize(&f.path))?;
    ensure(f.search.is_empty(), || summarize(&f.search))?;
    let a = example_matrix::<f64>();
    for (w, s) in [(4, 4), (32, 14), (32, 7), (1, 1), (3, 5)] {
        let c = SimtConfig::with_default_block(w, s).unwrap();
        let t = generate_tile(&a, &c).unwrap();
        ensure(reconstruct_path(&t, &c, 34, 8).unwrap() == sequential_path(a.row_offsets()), || {
            format!("fixture path differs at {c}")
        })?;
    }
    for (diag, &(x, y)) in walk_points(a.row_offsets()).iter().enumerate() {
        let p = merge_search(a.row_offsets(), diag, 8, 34).unwrap();
        ensure((p.x, p.y) == (x, y), || format!("fixture diag {diag}"))?;
    }
    Ok(format!(
        "{} fuzz tiles decode exactly; merge_search exhaustive on {} diagonals of {} matrices with m+n <= 2000",
        f.matrices * FUZZ_CONFIGS.len(),
        f.diagonals_checked,
        f.small_matrices
    ))
}

fn criterion_3() -> Outcome {
    let a = example_matrix::<f64>();
    let c = SimtConfig::new(4, 4, 4).unwrap();
    let t = generate_tile(&a, &c).unwrap();
    let span = 16;
    let pts = walk_points(a.row_offsets());
    let oracle_x: Vec<u32> = (0..=3).map(|i| pts[(i * span).min(42)].0 as u32).collect();
    let oracle_y: Vec<u32> = (0..=3).map(|i| pts[(i * span).min(42)].1 as u32).collect();
    let rows: Vec<u32> = (0..=t.tile_num()).map(|i| t.tile_row(i) as u32).collect();
    ensure(t.tile_x() == oracle_x.as_slice() && rows == oracle_y, || {
        format!("generated tile_x={:?} rows={rows:?}, oracle {oracle_x:?} {oracle_y:?}", t.tile_x())
    })?;

    let drawn_x = [0u32, 12, 26, 34];
    let drawn_y = [0u32, 3, 7, 8];
    let mut notes = Vec::new();
    for i in 0..4 {
        if drawn_x[i] != oracle_x[i] {
            notes.push(format!("tile_x[{i}] drawn={} computed={}", drawn_x[i], oracle_x[i]));
        }
        if drawn_y[i] != oracle_y[i] {
            notes.push(format!("tile_y[{i}] drawn={} computed={}", drawn_y[i], oracle_y[i]));
        }
    }
    // The printed coordinates cannot both lie on diagonals 16 and 32; these
    // two entries are the known inconsistency, every other value must match.
    let expected = ["tile_x[1] drawn=12 computed=13", "tile_y[2] drawn=7 computed=6"];
    ensure(notes == expected, || format!("unexpected deviations: {notes:?}"))?;

    let fields: Vec<LaneFields> = (4..8).map(|j| t.lane_fields(j)).collect();
    let xo: Vec<u32> = fields.iter().map(|f| f.x_offset).collect();
    let yo: Vec<u32> = fields.iter().map(|f| f.y_offset).collect();
    ensure(xo == [0, 3, 7, 10] && yo == [0, 1, 1, 2], || format!("tile 1 offsets x={xo:?} y={yo:?}"))?;
    let flags: String = (0..4).map(|k| if fields[0].bit_flag >> k & 1 == 1 { 'T' } else { 'F' }).collect();
    ensure(flags == "TFFF", || format!("tile 1 lane 0 flags {flags}"))?;
    ensure(t.tile_y().iter().all(|y| y & LONG_ROW_MARK == 0), || "unexpected long-row mark".into())?;
    Ok(format!(
        "tile_x={:?} rows={rows:?}; tile 1 x_offset={xo:?} y_offset={yo:?} lane 0 {flags}; deviations from the hand-drawn layout: {}",
        t.tile_x(),
        notes.join(", ")
    ))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0usize;
    for (w, s) in [(32u32, 14u32), (32, 7)] {
        let c = SimtConfig::new(w, s, w).unwrap();
        let bits = ceil_log2((w * s) as u64);
        let flag_mask = (1u32 << s) - 1;
        let flags: Vec<u32> = (0..10_000).map(|_| rng.gen::<u32>() & flag_mask).collect();
        let limit = w * s;
        let check = |x: u32, y: u32, flag: u32| -> Result<(), String> {
            let f = LaneFields { x_offset: x, y_offset: y, bit_flag: flag };
            let d = pack_descriptor(f, &c).map_err(|e| e.to_string())?;
            let expect = (flag << (2 * bits)) | (y << bits) | x;
            ensure(d.word() == expect && unpack_descriptor(d, &c) == f, || format!("{c} {f:?} -> {}", d.word()))
        };
        for x in 0..limit {
            for y in 0..limit {
                check(x, y, flags[((x * limit + y) as usize) % flags.len()])?;
                checked += 1;
            }
        }
        for &flag in &flags {
            check(limit - 1, limit - 1, flag)?;
            check(0, 0, flag)?;
            checked += 2;
        }
        let over = LaneFields { x_offset: limit, y_offset: 0, bit_flag: 0 };
        ensure(pack_descriptor(over, &c).is_err(), || format!("{c} accepted x_offset = {limit}"))?;
    }
    let c = SimtConfig::new(32, 14, 32).unwrap();
    let word = pack_descriptor(LaneFields { x_offset: 3, y_offset: 1, bit_flag: 1 }, &c).unwrap().word();
    ensure(word == 262659, || format!("(3,1,1) packs to {word}"))?;
    Ok(format!("{checked} round trips; (32,14) word for (3,1,1) = {word}"))
}

fn criterion_5(f: &Fuzz) -> Outcome {
    ensure(f.steps.is_empty(), || summarize(&f.steps))?;
    ensure(f.bounds.is_empty(), || summarize(&f.bounds))?;
    Ok(format!(
        "down bits = n and right steps = m on {} tiles; worst lane {} steps, tile {} steps, scratch {} slots; debug assertions {}",
        f.runs,
        f.worst.max_lane_steps,
        f.worst.max_tile_steps,
        f.worst.max_scratch_used,
        if cfg!(debug_assertions) { "on" } else { "off" }
    ))
}

fn criterion_6() -> Outcome {
    let mut parts = Vec::new();
    for (w, s) in FUZZ_CONFIGS {
        let len = 10 * (w * s) as usize;
        let vals = random_vector::<f64>(len, 0.5, 1.0, 6);
        let a: CsrMatrix<f64> = CooTriples::new(1, len, vals.into_iter().enumerate().map(|(c, v)| (0, c, v)).collect())
            .unwrap()
            .into();
        let x = random_vector::<f64>(len, 0.5, 1.0, 7);
        let c = SimtConfig::with_default_block(w, s).unwrap();
        let t = generate_tile(&a, &c).unwrap();
        let r_f = long_row_fraction(&t);
        let full_marked = (0..10).all(|i| t.is_long_row(i));
        let mut d = DualBuffer::new(1);
        let stats = spmv_merbit_stats(&t, &a, &x, &mut d, &c).unwrap();
        let want: f64 = x.iter().zip(a.values()).map(|(p, q)| p * q).sum();
        let rel = ((d.output()[0] - want) / want).abs();
        ensure(full_marked && r_f >= 0.9 && stats.fast_tiles == 10 && rel <= 1e-12, || {
            format!("{c}: r_f={r_f} fast={} rel={rel:e}", stats.fast_tiles)
        })?;
        parts.push(format!("({w},{s}) r_f={r_f:.3} rel={rel:.1e}"));
    }
    Ok(parts.join("; "))
}

fn criterion_7() -> Outcome {
    let mut checked = 0;
    for (i, kind) in Structure::ALL.iter().enumerate() {
        let a = random_matrix::<f64>(*kind, 300, 250, 6000, 70 + i as u64);
        for (w, s) in FUZZ_CONFIGS {
            let c = SimtConfig::new(w, s, 4 * w).unwrap();
            let t = generate_tile(&a, &c).unwrap();
            let mut dual = DualBuffer::new(a.n_rows());
            for it in 0..10u64 {
                let x = random_vector::<f64>(a.n_cols(), -1.0, 1.0, 700 + it);
                let parity = dual.parity();
                spmv_merbit_stats(&t, &a, &x, &mut dual, &c).unwrap();
                let mut fresh = DualBuffer::new(a.n_rows());
                spmv_merbit_stats(&t, &a, &x, &mut fresh, &c).unwrap();
                let same = dual.output().iter().zip(fresh.output()).all(|(p, q)| p.to_bits() == q.to_bits());
                ensure(same && dual.parity() != parity, || format!("{kind:?} {c} iteration {it}: outputs differ"))?;
                ensure(dual.next_output().iter().all(|v| v.to_bits() == 0), || {
                    format!("{kind:?} {c} iteration {it}: inactive buffer not zero")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} alternating-parity iterations bitwise equal to fresh buffers, inactive buffer zero after each"))
}

fn criterion_8() -> Outcome {
    let cases: Vec<(CsrMatrix<f64>, Vec<f64>)> = Structure::ALL
        .iter()
        .enumerate()
        .map(|(i, k)| {
            let a = random_matrix::<f64>(*k, 512, 512, 20000, 80 + i as u64);
            let x = random_vector::<f64>(512, -1.0, 1.0, 90 + i as u64);
            (a, x)
        })
        .collect();
    let run_all = || -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        for (a, x) in &cases {
            for (w, s) in FUZZ_CONFIGS {
                let c = SimtConfig::new(w, s, w).unwrap();
                let t = generate_tile(a, &c).unwrap();
                let mut d = DualBuffer::new(a.n_rows());
                for _ in 0..3 {
                    spmv_merbit_stats(&t, a, x, &mut d, &c).unwrap();
                    out.push(d.output().iter().map(|v| v.to_bits()).collect());
                }
                let mut y = vec![0.0; a.n_rows()];
                spmv_merge_runtime_into(a, x, &mut y, &c).unwrap();
                out.push(y.iter().map(|v| v.to_bits()).collect());
            }
        }
        out
    };
    let mut results = Vec::new();
    for threads in [1, 4, 8] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        results.push(pool.install(run_all));
    }
    ensure(results[0] == results[1] && results[0] == results[2], || "outputs differ across thread counts".into())?;
    Ok(format!("{} outputs bitwise identical for 1, 4 and 8 threads", results[0].len()))
}

fn criterion_9() -> Outcome {
    let g = strongly_connected_graph::<f64>(100, 4, 9);
    let p = build_transition(&g).unwrap();
    let cfg = PageRankConfig::default();
    let c = SimtConfig::new(32, 7, 256).unwrap();
    let run = |kind: KernelKind| {
        let mut b = kind.build(&p, &c).unwrap();
        pagerank(&p, &cfg, b.as_mut()).unwrap()
    };
    let merbit = run(KernelKind::Merbit);
    let reference = run(KernelKind::Csr);
    ensure(merbit.report.status == SolverStatus::Converged && merbit.report.iterations <= 210, || {
        format!("status {} after {} iterations", merbit.report.status, merbit.report.iterations)
    })?;
    ensure(merbit.report.metric < 1e-10, || format!("ERR {}", merbit.report.metric))?;
    let diff = merbit.pi.iter().zip(&reference.pi).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ensure(diff <= 1e-12, || format!("max |pi_merbit - pi_ref| = {diff:e}"))?;
    let worst_mass = merbit.mass_history.iter().map(|m| (m - 1.0).abs()).fold(0.0, f64::max);
    ensure(worst_mass <= 1e-12, || format!("|sum(pi) - 1| reached {worst_mass:e}"))?;

    // Fixed point check with a dense transition matrix built from the edges.
    let n = 100;
    let mut dense = vec![vec![0.0; n]; n];
    for (j, row) in (0..n).map(|j| (j, g.row(j).0)) {
        for &i in row {
            dense[i][j] = 1.0 / row.len() as f64;
        }
    }
    let fixed = (0..n)
        .map(|i| {
            let v = 0.85 * (0..n).map(|j| dense[i][j] * merbit.pi[j]).sum::<f64>() + 0.15 / n as f64;
            (v - merbit.pi[i]).abs()
        })
        .fold(0.0, f64::max);
    ensure(fixed < 1e-10, || format!("fixed point residual {fixed:e}"))?;
    Ok(format!(
        "ERR={:.2e} after {} iterations; max backend diff {diff:.1e}; max |sum-1| {worst_mass:.1e}",
        merbit.report.metric, merbit.report.iterations
    ))
}

fn criterion_10() -> Outcome {
    let a = laplacian_2d::<f64>(32);
    let x_true = random_vector::<f64>(a.n_cols(), -1.0, 1.0, 10);
    let b = spmv_csr_reference(&a, &x_true).unwrap();
    let c = SimtConfig::new(32, 7, 256).unwrap();
    let mut backend = KernelKind::Merbit.build(&a, &c).unwrap();
    let res = bicgstab(backend.as_mut(), &b, &BicgstabConfig::default()).unwrap();
    ensure(res.report.status == SolverStatus::Converged && res.report.metric < 1e-10, || {
        format!("status {} tol {:e}", res.report.status, res.report.metric)
    })?;
    // Residual recomputed from the triples, independent of every kernel.
    let mut ax = vec![0.0; a.n_rows()];
    for &(r, col, v) in a.to_triples().entries() {
        ax[r] += v * res.x[col];
    }
    let num: f64 = ax.iter().zip(&b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
    let den: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    let recomputed = num / den;
    ensure((recomputed - res.report.metric).abs() <= 1e-12, || {
        format!("reported {:e}, recomputed {recomputed:e}", res.report.metric)
    })?;

    let singular: CsrMatrix<f64> = CooTriples::new(2, 2, vec![(0, 0, 1.0)]).unwrap().into();
    let mut sb = KernelKind::Merbit.build(&singular, &c).unwrap();
    let s = bicgstab(sb.as_mut(), &[1.0, 1.0], &BicgstabConfig::default()).unwrap();
    ensure(matches!(s.report.status, SolverStatus::Breakdown(_)) && s.report.iterations < 10, || {
        format!("singular system: {} after {} iterations", s.report.status, s.report.iterations)
    })?;
    Ok(format!(
        "tol={:.2e} in {} iterations (recomputed {recomputed:.2e}); singular system: {} at iteration {}",
        res.report.metric, res.report.iterations, s.report.status, s.report.iterations
    ))
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut with_marks = 0;
    for case in 0..50 {
        let omega = [1u32, 2, 4, 8, 16, 32][rng.gen_range(0..6)];
        let sigma = loop {
            let s = rng.gen_range(1..=20);
            if 2 * ceil_log2((omega * s) as u64) + s <= 32 {
                break s;
            }
        };
        let kind = Structure::ALL[case % Structure::ALL.len()];
        let a = random_matrix::<f64>(kind, rng.gen_range(1..300), rng.gen_range(1..300), rng.gen_range(0..5000), case as u64);
        let (m, n) = (a.nnz(), a.n_rows());
        let c = SimtConfig::new(omega, sigma, omega).unwrap();
        let t = generate_tile(&a, &c).unwrap();
        let tiles = (m + n).div_ceil((omega * sigma) as usize);
        let lanes = (m + n).div_ceil(sigma as usize);
        let allocated = 4 * (2 * (tiles + 1) + lanes);
        let unmarked_lanes = lanes - omega as usize * t.marked_tiles();
        let traffic = 4 * (2 * (tiles + 1) + unmarked_lanes);
        ensure(t.allocated_bytes() == allocated && t.traffic_bytes() == traffic, || {
            format!("case {case}: arrays {} / {}, expected {allocated} / {traffic}", t.allocated_bytes(), t.traffic_bytes())
        })?;
        let full = metadata_footprint(m, n, &c, 0.0).unwrap();
        ensure(full == allocated as f64, || format!("case {case}: footprint(r_f=0) {full} vs {allocated}"))?;
        let r_lanes = (omega as usize * t.marked_tiles()) as f64 / lanes as f64;
        let modeled = metadata_footprint(m, n, &c, r_lanes).unwrap();
        ensure((modeled - traffic as f64).abs() <= 1e-9 * traffic as f64, || {
            format!("case {case}: footprint {modeled} vs traffic {traffic}")
        })?;
        with_marks += usize::from(t.marked_tiles() > 0);
    }

    let mut infeasible = 0;
    let mut checked = 0;
    for omega in (1..=64).chain([96, 128, 256, 512, 1024]) {
        for sigma in 1..=32 {
            let opts = KernelOpts {
                precision: PrecisionArg::F32,
                omega: Some(omega),
                sigma: None,
                block_size: None,
            };
            let rejected = opts.config_with_sigma(Some(sigma)).is_err();
            let expect = 2 * ceil_log2(omega as u64 * sigma as u64) + sigma > 32;
            ensure(rejected == expect, || format!("omega={omega} sigma={sigma}: rejected={rejected}"))?;
            infeasible += usize::from(expect);
            checked += 1;
        }
    }

    let a = example_matrix::<f64>();
    let timing = TimingOpts { iters: 3, warmup: 1, seed: 0 };
    let c = SimtConfig::new(4, 4, 8).unwrap();
    let mut records = bench_records(&a, "fixture", &KernelKind::ALL, &c, &timing).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let template = records[0].clone();
    for _ in 0..1000 {
        let mean_ns = rng.gen_range(1..u32::MAX as u64);
        let baseline_mean_ns = rng.gen_range(1..u32::MAX as u64);
        let nnz = rng.gen_range(0..100_000_000u64);
        records.push(BenchRecord {
            nnz,
            mean_ns,
            baseline_mean_ns,
            ct: throughput(nnz as usize, Duration::from_nanos(mean_ns)).unwrap(),
            speedup: speedup(Duration::from_nanos(baseline_mean_ns), Duration::from_nanos(mean_ns)).unwrap(),
            ..template.clone()
        });
    }
    for format in [Format::Csv, Format::Json] {
        let mut buf = Vec::new();
        write_records(&mut buf, &records, format).unwrap();
        let back: Vec<BenchRecord> = read_records(buf.as_slice(), format).unwrap();
        ensure(back == records, || format!("{format:?} round trip changed records"))?;
        for r in &back {
            let ct = 2.0 * r.nnz as f64 / (r.mean_ns as f64 / 1e9);
            let sp = r.baseline_mean_ns as f64 / r.mean_ns as f64;
            ensure(r.schema_version == SCHEMA_VERSION, || "schema version".into())?;
            ensure(r.recompute_ct().unwrap() == r.ct && r.recompute_speedup().unwrap() == r.speedup, || {
                format!("{format:?}: derived columns do not recompute for {r:?}")
            })?;
            ensure((ct - r.ct).abs() <= 1e-12 * ct.abs().max(1.0) && (sp - r.speedup).abs() <= 1e-12 * sp, || {
                format!("{format:?}: formula mismatch for {r:?}")
            })?;
        }
    }
    Ok(format!(
        "50 footprints match array accounting ({with_marks} with long-row tiles); {checked} (omega, sigma) pairs, {infeasible} rejected exactly when 2ceil(log2 omega*sigma)+sigma > 32; {} records recompute CT and speedup exactly",
        records.len()
    ))
}

fn informational() {
    let a = random_matrix::<f32>(Structure::PowerLaw, 512, 512, 20000, 12);
    let timing = TimingOpts { iters: 50, warmup: 5, seed: 0 };
    let c = SimtConfig::with_default_block(32, 14).unwrap();
    match bench_records(&a, "powerlaw-512", &KernelKind::ALL, &c, &timing) {
        Ok(rows) => {
            for r in rows {
                let ratio = r.t_p_over_t.map(|v| format!(" T_p/T={v:.2}")).unwrap_or_default();
                println!("info: bench {:<6} mean={}ns speedup={:.3}{ratio}", r.kernel, r.mean_ns, r.speedup);
            }
        }
        Err(e) => println!("info: bench failed: {e}"),
    }
    let configs: Vec<SimtConfig> = (1..=14).map(|s| SimtConfig::with_default_block(32, s).unwrap()).collect();
    match sweep_records(&a, "powerlaw-512", &configs, &timing) {
        Ok(rows) => {
            let curve: Vec<String> = rows.iter().map(|r| format!("{}:{:.2}", r.sigma, r.speedup)).collect();
            println!("info: sigma sweep speedup vs COO (f32) {}", curve.join(" "));
        }
        Err(e) => println!("info: sigma sweep failed: {e}"),
    }
    println!("info: timings come from an unoptimized CPU build and are not comparable to GPU figures");
}

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    })
}

fn main() -> ExitCode {
    let fuzz = run_fuzz();
    let criteria: Vec<(&str, Check)> = vec![
        ("three-way kernel agreement", Box::new(|| criterion_1(&fuzz))),
        ("path fidelity", Box::new(|| criterion_2(&fuzz))),
        ("fixture reproduction", Box::new(criterion_3)),
        ("descriptor bit-exactness", Box::new(criterion_4)),
        ("step accounting and bounds", Box::new(|| criterion_5(&fuzz))),
        ("long-row fast path", Box::new(criterion_6)),
        ("dual buffer", Box::new(criterion_7)),
        ("determinism across thread counts", Box::new(criterion_8)),
        ("pagerank", Box::new(criterion_9)),
        ("bicgstab", Box::new(criterion_10)),
        ("formula conformance", Box::new(criterion_11)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        match guarded(check) {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("criterion 12 INFO benchmark shape (not gated)");
    informational();
    println!("acceptance: {} of 11 gated criteria passed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
