use std::fs::File;
use std::io::{BufWriter, Write};

use merbit_core::format::{generate_tile, long_row_fraction, write_tile_cache};
use merbit_core::sparse::write_matrix_market;
use merbit_core::Scalar;

use super::{load, with_precision};
use crate::error::CliResult;
use crate::ConvertArgs;

fn convert_typed<T: Scalar>(args: &ConvertArgs) -> CliResult<()> {
    let c = args.kernel.config()?;
    let a = load::<T>(&args.matrix)?;
    let t = generate_tile(&a, &c)?;
    let mut w = BufWriter::new(File::create(&args.tile_out)?);
    write_tile_cache(&mut w, &t, T::PRECISION)?;
    w.flush()?;
    if let Some(p) = &args.mtx_out {
        let mut w = BufWriter::new(File::create(p)?);
        write_matrix_market(&a, &mut w)?;
        w.flush()?;
    }
    println!(
        "{}x{} nnz={} tiles={} lanes={} r_f={:.4} bytes={}",
        a.n_rows(),
        a.n_cols(),
        a.nnz(),
        t.tile_num(),
        t.lane_num(),
        long_row_fraction(&t),
        t.allocated_bytes()
    );
    Ok(())
}

pub fn run(args: &ConvertArgs) -> CliResult<()> {
    with_precision!(args.kernel.precision(), convert_typed(args))
}
