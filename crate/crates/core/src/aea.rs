//! Iterative half-GCD.
//!
//! Each pass chops a block of leading half-word digits off `V` by a binary
//! ladder of base ILE steps on two-digit windows. A completed left block
//! updates only the next stretch of digits its sibling will read; a completed
//! right block is merged with its left sibling into the parent block. Both
//! updates are exact integer arithmetic on short windows, so the windows seen
//! by every ILE call are the leading digits of the fully updated operands.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::AeaError;
use crate::ile::ile_window;
use crate::limb_view::{bit_length, bit_length_signed, to_biguint, LimbBase};
use crate::mat2::Mat2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceKind {
    IleCall,
    Merge,
    Update,
    Fix,
    Irregular,
    Squeeze,
    SignFlip,
}

impl TraceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TraceKind::IleCall => "ile_call",
            TraceKind::Merge => "merge",
            TraceKind::Update => "update",
            TraceKind::Fix => "fix",
            TraceKind::Irregular => "irregular",
            TraceKind::Squeeze => "squeeze",
            TraceKind::SignFlip => "sign_flip",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub step: u64,
    pub kind: TraceKind,
    pub level: u32,
    pub matrix: Option<Mat2>,
    /// Digit range of the pass's top window, 1-based from the most
    /// significant digit.
    pub window: Option<(u64, u64)>,
}

impl TraceEvent {
    /// Whether this event's matrix is a factor of the final matrix. Merge
    /// events carry products of earlier factors and are informational.
    pub fn is_factor(&self) -> bool {
        matches!(
            self.kind,
            TraceKind::IleCall | TraceKind::SignFlip | TraceKind::Irregular | TraceKind::Squeeze
        )
    }
}

/// Product of the factor events of `events`, in order.
pub fn replay(events: &[TraceEvent]) -> Mat2 {
    events
        .iter()
        .filter(|e| e.is_factor())
        .filter_map(|e| e.matrix.as_ref())
        .fold(Mat2::identity(), |acc, m| m.mul(&acc))
}

#[derive(Debug, Clone, Copy)]
pub struct AeaConfig {
    pub base: LimbBase,
    /// Finish with the bounded Euclid squeeze on the merged matrix.
    pub squeeze: bool,
    /// Accept inputs below the `8·W` size gate.
    pub allow_small: bool,
}

impl AeaConfig {
    pub fn new(base: LimbBase) -> Self {
        AeaConfig {
            base,
            squeeze: true,
            allow_small: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AeaStats {
    pub passes: u64,
    pub ile_calls: u64,
    /// Division steps done inside ILE on window-sized integers.
    pub window_steps: u64,
    /// Division steps done on full-size operands.
    pub long_divisions: u64,
    pub irregular: u64,
    pub sign_flips: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfGcdResult {
    pub matrix: Mat2,
    pub reduced: (BigUint, BigUint),
    pub trace: Vec<TraceEvent>,
    pub stats: AeaStats,
}

/// `ℓ(u) − 2^(s−1)·W` with `s = ⌊log₂(n/W)⌋`: the bound on `ℓ(V′)`.
pub fn contract_bits(n: u64, word: u64) -> u64 {
    let ratio = n / word.max(1);
    if ratio < 2 {
        return n.div_ceil(2);
    }
    let s = 63 - u64::from(ratio.leading_zeros());
    n - (1u64 << (s - 1)) * word
}

/// Half-GCD of `u ≥ v > 2`.
pub fn aea(u: &BigUint, v: &BigUint, cfg: &AeaConfig) -> Result<HalfGcdResult, AeaError> {
    aea_streaming(u, v, cfg, |_| {})
}

/// As [`aea`], handing every trace event to `sink` as soon as it is produced.
pub fn aea_streaming<F: FnMut(&TraceEvent)>(
    u: &BigUint,
    v: &BigUint,
    cfg: &AeaConfig,
    sink: F,
) -> Result<HalfGcdResult, AeaError> {
    run_aea(u, v, cfg, sink, false).map(|(r, _)| r)
}

pub(crate) fn run_aea<F: FnMut(&TraceEvent)>(
    u: &BigUint,
    v: &BigUint,
    cfg: &AeaConfig,
    sink: F,
    probe: bool,
) -> Result<(HalfGcdResult, Vec<Probe>), AeaError> {
    if v > u || *v <= BigUint::from(2u32) {
        return Err(AeaError::BadPair);
    }
    let n = bit_length(u);
    let word = cfg.base.limb_bits();
    if !cfg.allow_small && n < 8 * word {
        return Err(AeaError::TooSmall {
            needed: 8 * word,
            got: n,
        });
    }
    let mut run = Run {
        digit: cfg.base.sweep_digit(),
        goal: n.div_ceil(2),
        step: 0,
        trace: Vec::new(),
        stats: AeaStats::default(),
        sink,
        probes: probe.then(Vec::new),
    };
    let (matrix, (uu, vv)) = run.half(u, v, cfg)?;

    let reduced = match (to_biguint(&uu), to_biguint(&vv)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(AeaError::Invariant("reduced pair is negative".into())),
    };
    let (cu, cv) = matrix.apply_unsigned(u, v);
    if cu != uu || cv != vv {
        return Err(AeaError::Invariant(format!(
            "matrix {matrix} does not map the input to the reduced pair"
        )));
    }
    if !matrix.has_unit_det() {
        return Err(AeaError::Invariant(format!("det {matrix} is not ±1")));
    }
    let result = HalfGcdResult {
        matrix,
        reduced,
        trace: run.trace,
        stats: run.stats,
    };
    Ok((result, run.probes.unwrap_or_default()))
}

type Pair = (BigInt, BigInt);

enum PassEnd {
    Complete,
    /// The binding target was reached before the ladder finished.
    Done,
    /// A window's V head vanished under a local target.
    Irregular,
}

struct Pass {
    matrix: Mat2,
    pair: Pair,
    end: PassEnd,
}

struct Run<F> {
    digit: LimbBase,
    /// `⌈n/2⌉`: the ladder stops once `ℓ(V) ≤ goal + 1`.
    goal: u64,
    step: u64,
    trace: Vec<TraceEvent>,
    stats: AeaStats,
    sink: F,
    probes: Option<Vec<Probe>>,
}

/// What a base step saw: its window, the pass-local product `C` of the
/// blocks finished before it, the pass input, and the digit shift that maps
/// `C·input` onto the window.
#[derive(Debug, Clone)]
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) struct Probe {
    pub window: Pair,
    pub pending: Mat2,
    pub input: Pair,
    pub shift: i64,
    pub digit: LimbBase,
}

impl<F: FnMut(&TraceEvent)> Run<F> {
    fn emit(
        &mut self,
        kind: TraceKind,
        level: u32,
        matrix: Option<Mat2>,
        window: Option<(u64, u64)>,
    ) {
        let ev = TraceEvent {
            step: self.step,
            kind,
            level,
            matrix,
            window,
        };
        (self.sink)(&ev);
        self.trace.push(ev);
    }

    fn half(
        &mut self,
        u: &BigUint,
        v: &BigUint,
        cfg: &AeaConfig,
    ) -> Result<(Mat2, Pair), AeaError> {
        let n = bit_length(u);
        let stop = self.goal + 1;
        let mut cum = Mat2::identity();
        let mut pair: Pair = (BigInt::from(u.clone()), BigInt::from(v.clone()));
        let limit = contract_bits(n, cfg.base.limb_bits());
        if bit_length(v) <= stop.min(limit) {
            return Ok((cum, pair));
        }

        while !pair.1.is_zero() && bit_length_signed(&pair.1) > stop {
            let pass = self.pass(&pair)?;
            let progressed = !pass.matrix.is_identity();
            cum = pass.matrix.mul(&cum);
            pair = pass.pair;
            if pair.1.is_zero() {
                break;
            }
            match pass.end {
                PassEnd::Complete | PassEnd::Done if progressed => {}
                PassEnd::Done if bit_length_signed(&pair.1) <= stop => {}
                PassEnd::Irregular => {
                    self.stats.irregular += 1;
                    self.long_step(&mut cum, &mut pair, TraceKind::Irregular);
                }
                _ => self.long_step(&mut cum, &mut pair, TraceKind::Irregular),
            }
        }

        if cfg.squeeze && !pair.1.is_zero() {
            let mmax = bit_length(v).saturating_sub(n.div_ceil(2) + 1);
            self.squeeze_into(&mut cum, &mut pair, mmax);
        }

        while !pair.1.is_zero() && bit_length_signed(&pair.1) > limit {
            self.long_step(&mut cum, &mut pair, TraceKind::Squeeze);
        }
        Ok((cum, pair))
    }

    /// One full-precision Euclid step folded into `cum`.
    fn long_step(&mut self, cum: &mut Mat2, pair: &mut Pair, kind: TraceKind) {
        let (q, r) = pair.0.div_rem(&pair.1);
        let q = q.magnitude().clone();
        let e = Mat2::euclid_step(&q);
        *cum = e.mul(cum);
        let v = std::mem::replace(&mut pair.1, r);
        pair.0 = v;
        self.stats.long_divisions += 1;
        self.emit(kind, 0, Some(e), None);
    }

    fn squeeze_into(&mut self, cum: &mut Mat2, pair: &mut Pair, mmax: u64) {
        let mut steps = Vec::new();
        squeeze_with(cum, pair, mmax, |e| steps.push(e.clone()));
        for e in steps {
            self.stats.long_divisions += 1;
            self.emit(TraceKind::Squeeze, 0, Some(e), None);
        }
    }

    /// Sign and order normalization of `pair`; the correction is folded into
    /// `m` and traced.
    fn normalize(&mut self, pair: &mut Pair, m: &mut Mat2, level: u32) {
        let neg_v = pair.1.is_negative();
        let neg_u = pair.0.is_negative();
        let mut e = Mat2::signs(neg_u, neg_v);
        if neg_u {
            pair.0 = -&pair.0;
        }
        if neg_v {
            pair.1 = -&pair.1;
        }
        if pair.0 < pair.1 {
            std::mem::swap(&mut pair.0, &mut pair.1);
            e = Mat2::swap().mul(&e);
        }
        if !e.is_identity() {
            *m = e.mul(m);
            self.stats.sign_flips += 1;
            self.emit(TraceKind::SignFlip, level, Some(e), None);
        }
    }

    fn pass(&mut self, input: &Pair) -> Result<Pass, AeaError> {
        self.stats.passes += 1;
        let digit = self.digit;
        let tau = digit.limb_bits();
        let lb = digit.log2();
        let (u, v) = input;
        let len = digit.digit_count(u.magnitude());

        let excess = bit_length_signed(v).saturating_sub(self.goal);
        let chop = excess.div_ceil(tau).max(1);
        let height = chop.next_power_of_two().trailing_zeros();
        let width = 2u64 << height;

        // Top window of `width` digits and what lies below it.
        let (top, low, pad, goal_w) = if width >= len {
            let pad = width - len;
            let top = (digit.shift_up(u, pad), digit.shift_up(v, pad));
            (top, None, pad, self.goal as f64 + pad as f64 * lb)
        } else {
            let k = len - width;
            let (uh, ul) = digit.split(u, k);
            let (vh, vl) = digit.split(v, k);
            (
                (uh, vh),
                Some(((ul, vl), k)),
                0,
                self.goal as f64 - k as f64 * lb,
            )
        };

        let h_top = height as usize;
        let mut lo_left: Vec<Option<Pair>> = vec![None; h_top + 1];
        let mut lo_right: Vec<Option<Pair>> = vec![None; h_top + 1];
        let mut left: Vec<Option<Mat2>> = vec![None; h_top + 1];
        let mut win = self.descend(top.clone(), h_top, &mut lo_left);

        let steps = 1u64 << height;
        for i in 1..=steps {
            self.step += 1;
            let rel = goal_w - (width - i - 1) as f64 * lb;
            let binding = rel >= tau as f64;
            let target = if binding { rel.floor() as u64 } else { tau };

            if self.probes.is_some() {
                let probe = Probe {
                    window: win.clone(),
                    pending: pending(&left, i),
                    input: input.clone(),
                    shift: (width - i - 1) as i64 + low.as_ref().map_or(0, |l| l.1 as i64)
                        - pad as i64,
                    digit,
                };
                if let Some(p) = self.probes.as_mut() {
                    p.push(probe);
                }
            }
            let uw = win.0.magnitude().clone();
            let vw = win.1.magnitude().clone();
            let mut mat = if bit_length(&vw) < target + 1 {
                if binding {
                    return Ok(self.abort(input, &left, i, PassEnd::Done));
                }
                if bit_length(&uw) > target + 1 {
                    return Ok(self.abort(input, &left, i, PassEnd::Irregular));
                }
                Mat2::identity()
            } else {
                let r = ile_window(&uw, &vw, target);
                self.stats.window_steps += r.steps;
                r.matrix
            };
            self.stats.ile_calls += 1;
            self.emit(TraceKind::IleCall, 0, Some(mat.clone()), Some((i, i + 1)));
            let mut rem = mat.apply(&win.0, &win.1);

            // Climb while the finished block is a right child.
            let mut h = 0usize;
            loop {
                if h == h_top {
                    let mut pair = match &low {
                        None => (
                            digit.shift_down_exact(&rem.0, pad),
                            digit.shift_down_exact(&rem.1, pad),
                        ),
                        Some(((ul, vl), k)) => {
                            let (tu, tv) = mat.apply(ul, vl);
                            (
                                digit.shift_up(&rem.0, *k) + tu,
                                digit.shift_up(&rem.1, *k) + tv,
                            )
                        }
                    };
                    self.emit(TraceKind::Fix, h as u32, None, Some((1, width)));
                    self.normalize(&mut pair, &mut mat, h as u32);
                    return Ok(Pass {
                        matrix: mat,
                        pair,
                        end: PassEnd::Complete,
                    });
                }
                let block = i >> h;
                let span = 1u64 << h;
                if block % 2 == 1 {
                    // Left child: update the parent's low half, open the
                    // right sibling's window.
                    let lo = lo_left[h + 1].take().expect("left low half");
                    let (tu, tv) = mat.apply(&lo.0, &lo.1);
                    let mut a = (
                        digit.shift_up(&rem.0, 2 * span) + tu,
                        digit.shift_up(&rem.1, 2 * span) + tv,
                    );
                    self.normalize(&mut a, &mut mat, h as u32);
                    self.emit(
                        TraceKind::Update,
                        h as u32,
                        None,
                        Some((i + span + 1, i + 3 * span)),
                    );
                    let (hu, lu) = digit.split(&a.0, span);
                    let (hv, lv) = digit.split(&a.1, span);
                    lo_right[h + 1] = Some((lu, lv));
                    left[h] = Some(mat);
                    win = self.descend((hu, hv), h, &mut lo_left);
                    break;
                }
                // Right child: finish the parent and merge.
                let lo = lo_right[h + 1].take().expect("right low half");
                let (tu, tv) = mat.apply(&lo.0, &lo.1);
                let mut p = (
                    digit.shift_up(&rem.0, span) + tu,
                    digit.shift_up(&rem.1, span) + tv,
                );
                self.normalize(&mut p, &mut mat, h as u32);
                self.emit(
                    TraceKind::Update,
                    h as u32,
                    None,
                    Some((i + span + 1, i + 2 * span)),
                );
                let l = left[h].take().expect("left sibling");
                mat = mat.mul(&l);
                rem = p;
                h += 1;
                self.emit(TraceKind::Merge, h as u32, Some(mat.clone()), None);
            }
        }
        Err(AeaError::Invariant(
            "ladder ended without a top block".into(),
        ))
    }

    /// Splits a level-`h` window down to the base window, storing the low
    /// halves the left children will need.
    fn descend(&self, mut w: Pair, h: usize, lo_left: &mut [Option<Pair>]) -> Pair {
        for g in (1..=h).rev() {
            let span = 1u64 << g;
            let (hu, lu) = self.digit.split(&w.0, span);
            let (hv, lv) = self.digit.split(&w.1, span);
            lo_left[g] = Some((lu, lv));
            w = (hu, hv);
        }
        w
    }

    /// Stops the ladder before step `i`: the blocks finished so far are
    /// exactly the pending left children.
    fn abort(&mut self, input: &Pair, left: &[Option<Mat2>], i: u64, end: PassEnd) -> Pass {
        let mut mat = pending(left, i);
        let mut pair = mat.apply(&input.0, &input.1);
        self.emit(TraceKind::Fix, 0, None, None);
        self.normalize(&mut pair, &mut mat, 0);
        Pass {
            matrix: mat,
            pair,
            end,
        }
    }
}

/// Product of the left blocks still waiting for a sibling before step `i`,
/// earliest (highest level) first.
fn pending(left: &[Option<Mat2>], i: u64) -> Mat2 {
    let done = i - 1;
    let mut mat = Mat2::identity();
    for (h, slot) in left.iter().enumerate().rev() {
        if done >> h & 1 == 1 {
            if let Some(l) = slot {
                mat = l.mul(&mat);
            }
        }
    }
    mat
}

/// Extends `m` by single Euclid steps on `pair` while every entry of the
/// extended matrix stays within `2^mmax`.
pub fn squeeze(m: &Mat2, pair: (&BigInt, &BigInt), mmax: u64) -> (Mat2, (BigInt, BigInt)) {
    let mut m = m.clone();
    let mut pair = (pair.0.clone(), pair.1.clone());
    squeeze_with(&mut m, &mut pair, mmax, |_| {});
    (m, pair)
}

fn squeeze_with(cum: &mut Mat2, pair: &mut Pair, mmax: u64, mut on_step: impl FnMut(&Mat2)) {
    let bound = BigUint::one() << mmax;
    while !pair.1.is_zero() {
        let (q, r) = pair.0.div_rem(&pair.1);
        let e = Mat2::euclid_step(q.magnitude());
        let next = e.mul(cum);
        if next.max_abs_entry() > bound {
            break;
        }
        *cum = next;
        let v = std::mem::replace(&mut pair.1, r);
        pair.0 = v;
        on_step(&e);
    }
}

/// Checks the trace's prefix property: at the last merge of every step, the
/// partial matrix applied to `(u, v)` gives a `V` strictly shorter than at the
/// previous such cut (the first cut is compared with `v` itself).
pub fn prefix_violations(u: &BigUint, v: &BigUint, trace: &[TraceEvent]) -> Vec<u64> {
    let (u, v) = (BigInt::from(u.clone()), BigInt::from(v.clone()));
    let mut cum = Mat2::identity();
    let mut last = bit_length_signed(&v);
    let mut bad = Vec::new();
    for (k, ev) in trace.iter().enumerate() {
        if ev.is_factor() {
            if let Some(m) = &ev.matrix {
                cum = m.mul(&cum);
            }
        }
        let cut = ev.kind == TraceKind::Merge
            && trace[k + 1..]
                .iter()
                .take_while(|e| e.step == ev.step)
                .all(|e| e.kind != TraceKind::Merge);
        if cut {
            let (_, vv) = cum.apply(&u, &v);
            let bits = bit_length_signed(&vv);
            if bits >= last {
                bad.push(ev.step);
            }
            last = bits;
        }
    }
    bad
}
