//! Small 2-D FFT helpers over rustfft, used for the frequency-domain
//! x-update and the exact lambda_min of circular blurs.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// Forward 2-D FFT of a row-major real plane.
pub fn fft2(plane: &[f64], h: usize, w: usize) -> Vec<Complex<f64>> {
    let mut data: Vec<Complex<f64>> = plane.iter().map(|&v| Complex::new(v, 0.0)).collect();
    fft2_complex(&mut data, h, w, false);
    data
}

/// Inverse 2-D FFT returning the real part, normalized by 1/(h*w).
pub fn ifft2_real(freq: &[Complex<f64>], h: usize, w: usize) -> Vec<f64> {
    let mut data = freq.to_vec();
    fft2_complex(&mut data, h, w, true);
    let scale = 1.0 / (h * w) as f64;
    data.iter().map(|c| c.re * scale).collect()
}

fn fft2_complex(data: &mut [Complex<f64>], h: usize, w: usize, inverse: bool) {
    assert_eq!(data.len(), h * w);
    let mut planner = FftPlanner::new();
    let row_fft = if inverse {
        planner.plan_fft_inverse(w)
    } else {
        planner.plan_fft_forward(w)
    };
    for r in 0..h {
        row_fft.process(&mut data[r * w..(r + 1) * w]);
    }
    let col_fft = if inverse {
        planner.plan_fft_inverse(h)
    } else {
        planner.plan_fft_forward(h)
    };
    let mut col = vec![Complex::new(0.0, 0.0); h];
    for c in 0..w {
        for r in 0..h {
            col[r] = data[r * w + c];
        }
        col_fft.process(&mut col);
        for r in 0..h {
            data[r * w + c] = col[r];
        }
    }
}
