use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_rational::BigRational;

use super::cache::Cache;
use super::stats::{fit_records, format_decimal, Stat};
use crate::error::{Error, Result};
use crate::hecke::Pipeline;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlotFiles {
    pub data: PathBuf,
    pub script: PathBuf,
    pub fit: PathBuf,
}

/// Write `<stat>_p<p>_k<k>.dat`, `.gp` and `.fit.txt` into `out`. Rows are
/// `d(N)` and the statistic, sorted by level; levels with `N = p` are left
/// out unless requested.
pub fn emit_plot(
    cache: &Cache,
    stat: Stat,
    p: u64,
    k: u32,
    pipeline: Pipeline,
    include_level_equals_p: bool,
    out: &Path,
) -> Result<PlotFiles> {
    let slice: Vec<_> =
        cache.slice(p, k, pipeline).into_iter().filter(|r| include_level_equals_p || !r.level_equals_p).collect();
    if slice.is_empty() {
        return Err(Error::EmptySlice { p, k });
    }
    let fit = fit_records(slice.iter().copied(), stat)?;
    let alpha_dec = format_decimal(&fit.alpha, 6);
    let stem = format!("{stat}_p{p}_k{k}");
    std::fs::create_dir_all(out)?;

    let mut dat = format!("# p={p} k={k} stat={stat} alpha={} ({alpha_dec})\n# d(N) {stat}(N)\n", fit.alpha);
    for r in &slice {
        writeln!(dat, "{} {}", r.d, stat.render(&stat.of(r))).unwrap();
    }

    let gp = format!(
        "set terminal pngcairo size 800,600\n\
         set output '{stem}.png'\n\
         set key left top\n\
         set xlabel 'd(N)'\n\
         set ylabel '{stat}(N)'\n\
         set title 'p = {p}, k = {k}'\n\
         alpha = {alpha_dec}\n\
         plot '{stem}.dat' using 1:2 with points pt 7 ps 0.6 lc rgb 'black' title '{stat}(N)', \\\n     \
         alpha * x with lines lw 2 lc rgb 'green' title sprintf('%.4f d(N)', alpha)\n"
    );

    let fit_txt = format!(
        "alpha = {}\nalpha_decimal = {alpha_dec}\npoints = {}\nsum_xy = {}\nsum_xx = {}\n",
        fit.alpha, fit.points, fit.sum_xy, fit.sum_xx
    );

    let files = PlotFiles {
        data: out.join(format!("{stem}.dat")),
        script: out.join(format!("{stem}.gp")),
        fit: out.join(format!("{stem}.fit.txt")),
    };
    std::fs::write(&files.data, dat)?;
    std::fs::write(&files.script, gp)?;
    std::fs::write(&files.fit, fit_txt)?;
    Ok(files)
}

/// Parse the `alpha = n/d` line of a `.fit.txt` file.
pub fn read_fit_alpha(path: &Path) -> Result<BigRational> {
    let text = std::fs::read_to_string(path)?;
    text.lines()
        .find_map(|l| l.strip_prefix("alpha = "))
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| Error::Inconsistent(format!("{}: no alpha line", path.display())))
}
