//! C interface to the `phaseslope` toolkit.
//!
//! Every fallible function returns a [`PsStatus`]. On failure the message is
//! kept per thread and can be fetched with [`ps_last_error_message`].
//! Antenna patterns are opaque [`PsPattern`] handles released with
//! [`ps_pattern_free`]. Output arrays are caller-owned.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use phaseslope::antennas::{AntennaPattern, PatternKind};
use phaseslope::channel::{LinkGains, ScenarioDraw};
use phaseslope::schemes::{sum_snr, Scheme, SlopeSet, SystemConfig};
use phaseslope::slopes::{abn_construct, check_abn, f_closed, Construction};
use phaseslope::Error;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Parse = 3,
    Infeasible = 4,
    DecompositionUnavailable = 5,
    GridTooLarge = 6,
    Config = 7,
    Io = 8,
    /// An output buffer is shorter than the result.
    BufferTooSmall = 9,
    /// A Rust panic was caught at the boundary.
    Internal = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsScheme {
    Abn = 0,
    Asn = 1,
    Alamouti = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsConstruction {
    Primary = 0,
    Reciprocal = 1,
}

/// Opaque antenna pattern.
pub struct PsPattern {
    inner: AntennaPattern,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(e: &Error) -> PsStatus {
    match e {
        Error::Input(_) => PsStatus::InvalidInput,
        Error::Parse { .. } => PsStatus::Parse,
        Error::Infeasible(_) => PsStatus::Infeasible,
        Error::DecompositionUnavailable(_) => PsStatus::DecompositionUnavailable,
        Error::GridTooLarge { .. } => PsStatus::GridTooLarge,
        Error::Config(_) => PsStatus::Config,
        Error::Io { .. } => PsStatus::Io,
    }
}

struct Fail(PsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            PsStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PsStatus::Internal
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(PsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn slice<'a>(ptr: *const f64, len: usize, what: &str) -> Result<&'a [f64], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn emit(values: &[f64], out: *mut f64, capacity: usize, what: &str) -> Result<(), Fail> {
    if values.len() > capacity {
        return Err(Fail(
            PsStatus::BufferTooSmall,
            format!("{what} needs {} entries, buffer holds {capacity}", values.len()),
        ));
    }
    if values.is_empty() {
        return Ok(());
    }
    if out.is_null() {
        return Err(null(what));
    }
    std::ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    Ok(())
}

/// Copies the calling thread's last error message into `buf` (NUL
/// terminated, truncated to `len`). Returns the full message length in
/// bytes, excluding the terminator. `buf` may be null to query the length.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn ps_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

unsafe fn put_pattern(p: AntennaPattern, out: *mut *mut PsPattern) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(PsPattern { inner: p }));
    Ok(())
}

/// Unit-gain omnidirectional pattern.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_pattern_ideal_omni(out: *mut *mut PsPattern) -> PsStatus {
    guard(|| put_pattern(AntennaPattern::synthesize(PatternKind::IdealOmni)?, out))
}

/// Omnidirectional pattern with `order` power ripples of `depth_db` peak to trough.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_pattern_ripple_omni(depth_db: f64, order: u32, out: *mut *mut PsPattern) -> PsStatus {
    guard(|| {
        put_pattern(
            AntennaPattern::synthesize(PatternKind::RippleOmni { depth_db, order })?,
            out,
        )
    })
}

/// Sector pattern pointing at azimuth 0 with half-power width `beamwidth_deg`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_pattern_sector(beamwidth_deg: f64, floor_db: f64, out: *mut *mut PsPattern) -> PsStatus {
    guard(|| {
        put_pattern(
            AntennaPattern::synthesize(PatternKind::Sector {
                beamwidth_deg,
                floor_db,
            })?,
            out,
        )
    })
}

/// Loads a pattern CSV (`azimuth_deg,gain_db[,phase_deg]`).
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` valid for one pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_pattern_load(path: *const c_char, out: *mut *mut PsPattern) -> PsStatus {
    guard(|| {
        if path.is_null() {
            return Err(null("path"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| Fail(PsStatus::InvalidInput, "path is not UTF-8".into()))?;
        put_pattern(AntennaPattern::load(path)?, out)
    })
}

/// Returns a copy rotated by `offset_rad`.
///
/// # Safety
/// `pattern` must come from this library; `out` valid for one pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_pattern_rotated(
    pattern: *const PsPattern,
    offset_rad: f64,
    out: *mut *mut PsPattern,
) -> PsStatus {
    guard(|| {
        let p = pattern.as_ref().ok_or_else(|| null("pattern"))?;
        put_pattern(p.inner.rotated(offset_rad), out)
    })
}

/// Complex far-field value at azimuth `phi` (radians).
///
/// # Safety
/// `pattern` must come from this library; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_pattern_value(pattern: *const PsPattern, phi: f64, re: *mut f64, im: *mut f64) -> PsStatus {
    guard(|| {
        let p = pattern.as_ref().ok_or_else(|| null("pattern"))?;
        if re.is_null() || im.is_null() {
            return Err(null("re/im"));
        }
        let v = p.inner.value(phi);
        *re = v.re;
        *im = v.im;
        Ok(())
    })
}

/// Amplitude gain `|g(phi)|`.
///
/// # Safety
/// `pattern` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_pattern_gain(pattern: *const PsPattern, phi: f64, out: *mut f64) -> PsStatus {
    guard(|| {
        let p = pattern.as_ref().ok_or_else(|| null("pattern"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = p.inner.gain(phi);
        Ok(())
    })
}

/// Releases a pattern. Null is ignored.
///
/// # Safety
/// `pattern` must be null or come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn ps_pattern_free(pattern: *mut PsPattern) {
    if !pattern.is_null() {
        drop(Box::from_raw(pattern));
    }
}

/// Phase-independent beamforming slopes (rad/s) for `n_rx` x `n_tx` antennas
/// over bursts of `k` packets with period `period` seconds.
///
/// # Safety
/// `tx_out` must hold `tx_len` doubles and `rx_out` `rx_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ps_abn_construct(
    n_rx: usize,
    n_tx: usize,
    k: usize,
    period: f64,
    variant: PsConstruction,
    tx_out: *mut f64,
    tx_len: usize,
    rx_out: *mut f64,
    rx_len: usize,
) -> PsStatus {
    guard(|| {
        let variant = match variant {
            PsConstruction::Primary => Construction::Primary,
            PsConstruction::Reciprocal => Construction::Reciprocal,
        };
        let s = abn_construct(n_rx, n_tx, k, period, variant)?;
        emit(&s.tx, tx_out, tx_len, "tx_out")?;
        emit(&s.rx, rx_out, rx_len, "rx_out")
    })
}

/// Checks beamforming slopes for phase independence. Writes 1 or 0 to
/// `optimal` and the number of violated conditions to `violations`.
///
/// # Safety
/// `tx` and `rx` must hold `n_tx` and `n_rx` doubles; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_check_abn(
    tx: *const f64,
    n_tx: usize,
    rx: *const f64,
    n_rx: usize,
    k: usize,
    period: f64,
    tol: f64,
    optimal: *mut c_int,
    violations: *mut usize,
) -> PsStatus {
    guard(|| {
        let slopes = SlopeSet::new(slice(tx, n_tx, "tx")?.to_vec(), slice(rx, n_rx, "rx")?.to_vec(), "ffi");
        if optimal.is_null() || violations.is_null() {
            return Err(null("optimal/violations"));
        }
        let report = check_abn(&slopes, k, period, tol)?;
        *optimal = c_int::from(report.optimal);
        *violations = report.violations.len();
        Ok(())
    })
}

/// Burst sum-SNR for one channel draw.
///
/// `tx_gains`/`psi_s`/`tx_slopes` have `n_tx` entries and
/// `rx_gains`/`psi_r`/`rx_slopes` have `n_rx`. Transmit phases and slopes
/// are only read by the beamforming scheme and may be null otherwise.
///
/// # Safety
/// Non-null arrays must hold the stated number of doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_sum_snr(
    scheme: PsScheme,
    k: usize,
    period: f64,
    n_tx: usize,
    n_rx: usize,
    tx_gains: *const f64,
    rx_gains: *const f64,
    psi_s: *const f64,
    psi_r: *const f64,
    tx_slopes: *const f64,
    rx_slopes: *const f64,
    out: *mut f64,
) -> PsStatus {
    guard(|| {
        let scheme = match scheme {
            PsScheme::Abn => Scheme::Abn,
            PsScheme::Asn => Scheme::Asn,
            PsScheme::Alamouti => Scheme::Alamouti,
        };
        let tx_side = |p: *const f64, what: &str| -> Result<Vec<f64>, Fail> {
            if scheme != Scheme::Abn && p.is_null() {
                Ok(vec![0.0; n_tx])
            } else {
                Ok(slice(p, n_tx, what)?.to_vec())
            }
        };
        let cfg = SystemConfig::new(k, period, n_tx, n_rx)?;
        let gains = LinkGains::new(
            slice(tx_gains, n_tx, "tx_gains")?.to_vec(),
            slice(rx_gains, n_rx, "rx_gains")?.to_vec(),
        );
        let scenario = ScenarioDraw::from_phases(tx_side(psi_s, "psi_s")?, slice(psi_r, n_rx, "psi_r")?.to_vec());
        let slopes = SlopeSet::new(
            tx_side(tx_slopes, "tx_slopes")?,
            slice(rx_slopes, n_rx, "rx_slopes")?.to_vec(),
            "ffi",
        );
        if out.is_null() {
            return Err(null("out"));
        }
        *out = sum_snr(scheme, &cfg, &scenario, &slopes, &gains)?.sum;
        Ok(())
    })
}

/// `Σ_{k<K} cos(y − 2kx)` in closed form.
#[no_mangle]
pub extern "C" fn ps_f_closed(x: f64, y: f64, k: usize) -> f64 {
    f_closed(x, y, k)
}
