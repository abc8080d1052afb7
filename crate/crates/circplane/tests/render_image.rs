use circplane::formats::{decode_ppm, encode_ppm};
use circplane::parallel::render_par;
use circplane_core::render::{gray_level, hue_to_rgb, overlay_rgb, render_coloring, Raster, RenderMode, Window};
use circplane_core::StripScheme;

fn figure_window() -> Window {
    Window::new(-8.0, 8.0, -3.0, 3.0, 60).unwrap()
}

fn gray(sch: &StripScheme) -> Raster {
    let img = render_coloring(sch, &figure_window(), RenderMode::Gray, false);
    decode_ppm(&encode_ppm(&img)).unwrap()
}

// distance between gray levels on the 0..=255 circle (0 and 255 are the same color)
fn gray_gap(a: u8, b: u8) -> u8 {
    let d = a.abs_diff(b);
    d.min(255 - d)
}

fn schemes() -> [StripScheme; 2] {
    [StripScheme::thm1(), StripScheme::thm2(0.05).unwrap()]
}

#[test]
fn figure_dimensions() {
    let img = render_coloring(&StripScheme::thm1(), &figure_window(), RenderMode::Hue, true);
    assert_eq!((img.width, img.height), (960, 360));
    assert_eq!(&encode_ppm(&img)[..15], b"P6\n960 360\n255\n");
}

#[test]
fn decoded_pixels_match_pixel_centers() {
    let w = figure_window();
    for sch in schemes() {
        let g = gray(&sch);
        let hue = decode_ppm(&encode_ppm(&render_coloring(&sch, &w, RenderMode::Hue, false))).unwrap();
        for row in (0..w.height()).step_by(7) {
            for col in 0..w.width() {
                let c = sch.color_at(w.pixel_center(col, row));
                assert!(gray_gap(g.pixel(col, row)[0], gray_level(c, sch.r)) <= 1);
                assert_eq!(hue.pixel(col, row), hue_to_rgb(360.0 * c / sch.r));
            }
        }
    }
}

#[test]
fn horizontal_period_within_one_step() {
    let w = figure_window();
    let ppu = w.px_per_unit as f64;
    for sch in schemes() {
        let g = gray(&sch);
        let shift = (sch.ell * ppu).round() as usize;
        for row in 0..w.height() {
            for col in 0..w.width() - shift {
                let (a, b) = (g.pixel(col, row)[0], g.pixel(col + shift, row)[0]);
                assert!(gray_gap(a, b) <= 1, "row {row} col {col}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn diagonal_period_within_one_step() {
    let w = figure_window();
    let ppu = w.px_per_unit as f64;
    let sch = StripScheme::thm1();
    let g = gray(&sch);
    // strip height 1/2 is exactly 30 rows at 60 px per unit
    let drow = (sch.h * ppu).round() as usize;
    assert_eq!(drow as f64, sch.h * ppu);
    let dcol = (sch.strip_shift() * ppu).round() as usize;
    for row in drow..w.height() {
        for col in 0..w.width() - dcol {
            // the row above is one strip higher, so the pattern sits further right
            let (a, b) = (g.pixel(col, row)[0], g.pixel(col + dcol, row - drow)[0]);
            assert!(gray_gap(a, b) <= 1, "row {row} col {col}: {a} vs {b}");
        }
    }
}

#[test]
fn diagonal_period_against_exact_shift() {
    let w = figure_window();
    for sch in schemes() {
        let g = gray(&sch);
        for row in (0..w.height()).step_by(3) {
            for col in 0..w.width() {
                let p = w.pixel_center(col, row);
                let q = circplane_core::Point::new(p.x + sch.strip_shift(), p.y + sch.h);
                let expect = gray_level(sch.color_at(q), sch.r);
                assert!(gray_gap(g.pixel(col, row)[0], expect) <= 1);
            }
        }
    }
}

#[test]
fn one_wrap_per_period_per_row() {
    let w = figure_window();
    let sch = StripScheme::thm1();
    let g = gray(&sch);
    let periods = (w.x1 - w.x0) / sch.ell;
    for row in 0..w.height() {
        let jumps = (1..w.width())
            .filter(|&c| g.pixel(c, row)[0].abs_diff(g.pixel(c - 1, row)[0]) > 128)
            .count();
        assert!(
            (jumps as f64 - periods).abs() <= 1.0,
            "row {row}: {jumps} jumps for {periods} periods"
        );
    }
}

#[test]
fn overlay_marks_strip_lines() {
    let w = figure_window();
    let sch = StripScheme::thm1();
    let img = render_coloring(&sch, &w, RenderMode::Gray, true);
    let red = overlay_rgb(RenderMode::Gray);
    // a row covers [y_lo, y_hi); y = k/2 is the bottom edge of rows 29, 59, ...
    for row in (29..w.height()).step_by(30) {
        assert!((0..w.width()).all(|c| img.pixel(c, row) == red), "row {row}");
    }
    assert!((0..w.width()).any(|c| img.pixel(c, 30) != red));
    let interior = (0..w.width()).filter(|&c| img.pixel(c, 15) == red).count();
    let per_row = (w.x1 - w.x0) / sch.ell;
    assert!((interior as f64 - per_row).abs() <= 1.0, "{interior}");
}

#[test]
fn threaded_render_is_byte_identical() {
    let w = Window::new(-3.0, 4.0, -1.3, 2.2, 40).unwrap();
    for sch in schemes() {
        for mode in [RenderMode::Gray, RenderMode::Hue] {
            let serial = encode_ppm(&render_coloring(&sch, &w, mode, true));
            for threads in [1, 2, 3, 8, 500] {
                assert_eq!(encode_ppm(&render_par(&sch, &w, mode, true, threads)), serial);
            }
        }
    }
}
