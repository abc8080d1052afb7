//! Threaded drivers for sampling, sweeps and rendering. Output never depends
//! on the thread count.

use std::num::NonZeroUsize;
use std::thread;

use circplane_core::explore::{eps_sweep, SweepRow};
use circplane_core::render::{render_rows, Raster, RenderMode, Window};
use circplane_core::verify::{chunk_count, sample_chunk, MarginReport};
use circplane_core::StripScheme;

pub const THREADS_ENV: &str = "CIRCPLANE_THREADS";

/// `CIRCPLANE_THREADS` if set to a positive integer, else the available parallelism.
pub fn thread_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| thread::available_parallelism().map_or(1, NonZeroUsize::get))
}

/// Maps `f` over `0..n` on up to `threads` workers, results in index order.
fn ordered_map<T, F>(n: usize, threads: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let threads = threads.clamp(1, n.max(1));
    if threads == 1 {
        return (0..n).map(f).collect();
    }
    let mut slots: Vec<Option<T>> = (0..n).map(|_| None).collect();
    thread::scope(|scope| {
        let f = &f;
        let handles: Vec<_> = (0..threads)
            .map(|t| scope.spawn(move || (t..n).step_by(threads).map(|i| (i, f(i))).collect::<Vec<_>>()))
            .collect();
        for handle in handles {
            for (i, value) in handle.join().expect("worker panicked") {
                slots[i] = Some(value);
            }
        }
    });
    slots.into_iter().map(|s| s.expect("every index mapped")).collect()
}

/// Same report as `verify::sample_pairs`, with chunks spread over threads.
pub fn sample_pairs_par(sch: &StripScheme, n: u64, seed: u64, threads: usize) -> MarginReport {
    let chunks = chunk_count(n) as usize;
    ordered_map(chunks, threads, |c| sample_chunk(sch, n, seed, c as u64))
        .into_iter()
        .fold(MarginReport::empty(seed), MarginReport::merge)
}

/// Same rows as `explore::eps_sweep`, one row per task.
pub fn eps_sweep_par(eps_values: &[f64], samples: u64, seed: u64, threads: usize) -> Vec<SweepRow> {
    ordered_map(eps_values.len(), threads, |i| {
        eps_sweep(&eps_values[i..=i], samples, seed)[0]
    })
}

/// Same image as `render::render_coloring`, in bands of rows.
pub fn render_par(sch: &StripScheme, w: &Window, mode: RenderMode, overlay: bool, threads: usize) -> Raster {
    let (width, height) = (w.width(), w.height());
    let band = height.div_ceil(threads.max(1)).max(1);
    let bands = height.div_ceil(band);
    let parts = ordered_map(bands, threads, |b| {
        render_rows(sch, w, mode, overlay, b * band..((b + 1) * band).min(height))
    });
    Raster {
        width,
        height,
        rgb: parts.concat(),
    }
}
