"""Numeric pipeline for every named constant in the final estimates.

Split in three layers: closed-form evaluation of the stated constants,
suboptimization of the free parameters they came from, and a ledger of
computed-versus-stated deviations.  Quantities indexed by thresholds
like exp(exp(18)) never leave log scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .logscale import LogScaleReal
from .quadrature import j_moment
from .records import bound_check, equality_check, register_check

# Decay envelope for the prime-count deficit and its two regime knobs.
EPSILON_COEFF = 3192.34
PSI_DIVISOR = 273.79
PI_DIVISOR = 283.79

# Window growth and zero-density knobs.
WINDOW_DIVISOR = 256.59
ZERO_DENSITY_SCALE = 58.51
COMBINED_SCALE = 28.51
LOG_WINDOW_RATIO = 0.34

# Stated final constants.
DENSITY_CONSTANT_STATED = 453472.54
A1_STATED = 3537.613
A2_STATED = 78.383
KAPPA_STATED = 1.501
OMEGA_STATED = 1.598
NU_STATED = 0.375

CA_RATIO_CEIL = 29.193
CA_AFFINE_CEIL = 11.978
CA_DENOM = math.log(7.0 / 6.0)
B1 = 5.134

LN_T0 = math.exp(18.0)      # log of the density threshold
LN_X0 = math.exp(15.0)      # log of the psi threshold
LN_X_PI = math.exp(45.0)    # log of the pi threshold

# Remainder display coefficients absorbed into the envelope.
ABSORB_EXTRA = (1.76, 2.59)
ABSORB_DIVISOR = 256.6
ABSORB_POLY = (0.24, 4.65, 260.48)


def golden_minimize(f, lo: float, hi: float, tol: float = 1e-10) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


# ----------------------------------------------------------------------
# closed forms

def a1_of_kappa(kappa: float) -> float:
    return (685.026 * kappa ** (4.0 / 3.0)
            + 2061.486 * kappa ** (1.0 / 3.0)
            + 0.000001 * kappa + 0.001)


def a2_of_omega(omega: float, kappa: float = KAPPA_STATED,
                eta: float = 1.000001) -> float:
    pi2 = math.pi ** 2
    ew = math.exp(omega)
    e2w = math.exp(2.0 * omega)
    return ((144.001 / (pi2 * ew))
            * (eta ** 3 / omega + 3 * eta ** 2 / omega ** 2
               + 6 * eta ** 3 / omega ** 3 + 6 * eta ** 3 / omega ** 4)
            + (4.0 / e2w) * (eta ** 2 / omega ** 2 + 2 * eta / omega ** 3
                             + 1.0 / omega ** 4)
            + 4.689 * kappa / (pi2 * e2w)
            + (8.001 / (pi2 * ew))
            * (eta ** 2 / omega + 2 * eta / omega ** 2 + 2.0 / omega ** 3))


def kappa_objective(kappa: float) -> float:
    return math.exp(1.0 / kappa) * (200.593 * kappa ** (4.0 / 3.0)
                                    + 603.656 * kappa ** (1.0 / 3.0))


def omega_objective(omega: float, exp_coeff: float = 8.0 / 3.0) -> float:
    # The stated knob minimizes the 8 omega/3 reading; the 5 omega/3
    # reading pushes the minimizer past 3.
    return math.exp(exp_coeff * omega) * a2_of_omega(omega)


def nu_objective(nu: float) -> float:
    return math.exp(8.0 * nu / 3.0) / nu


def density_constant(kappa: float = KAPPA_STATED,
                     omega: float = OMEGA_STATED,
                     nu: float = NU_STATED,
                     a1: float | None = None,
                     a2: float | None = None,
                     ln_T: float = LN_T0) -> float:
    """Final density constant from its stated assembly."""
    a1 = a1_of_kappa(kappa) if a1 is None else a1
    a2 = a2_of_omega(omega, kappa) if a2 is None else a2
    main = (100.0 * math.exp(1.0 / kappa + 5.0 * omega / 3.0
                             + 8.0 * nu / 3.0)
            / (394.0 * math.pi * nu) * a1 * a2)
    small = (1.0 / ln_T ** 4) * (16.0 / (2.0 * math.pi * nu) + 1.0 / nu)
    tail = (ca_value(ln_T) / ln_T) / (nu * ln_T ** 3)
    return main + small + tail


# ----------------------------------------------------------------------
# the counting-cost term at huge heights

def ca_value(ln_T: float, a_ratio: float = 1.0) -> float:
    """Counting cost at height T with A = a_ratio * T, in log scale."""
    if not 1.0 <= a_ratio <= 595.0 / 594.0:
        raise ValueError("a_ratio outside [1, 595/594]")
    T = LogScaleReal.from_ln(ln_T)
    A = LogScaleReal.from_ln(ln_T + math.log(a_ratio))
    shifted = T + 1.75
    x = (A.pow(0.75) * shifted.pow(1.5) * (16.0 / 9.0)
         + A.pow(0.75) * shifted.pow(0.5) * B1)
    return (x.log() + (x + 2.0).log() + math.log(2.0)) / CA_DENOM


_CHK_CA_RATIO = register_check(
    "constants.ca_ratio",
    "counting cost over log T stays under 29.193 at the density "
    "threshold")
_CHK_CA_AFFINE = register_check(
    "constants.ca_affine",
    "counting cost stays under 29.193 log T + 11.978 at the density "
    "threshold")


def counting_cost_checks(ln_T: float = LN_T0):
    worst_ratio = -math.inf
    worst_affine = -math.inf
    for r in (1.0, 595.0 / 594.0):
        c = ca_value(ln_T, r)
        worst_ratio = max(worst_ratio, c / ln_T)
        worst_affine = max(worst_affine, c - CA_RATIO_CEIL * ln_T)
    # Double rounding at 1e8 scale leaves ~1e-7 absolute slack.
    return [
        bound_check(_CHK_CA_RATIO,
                    "counting cost ratio ceiling at both A endpoints",
                    lhs=worst_ratio, rhs=CA_RATIO_CEIL, err=1e-12,
                    notes=f"lnT={ln_T:.6g}"),
        bound_check(_CHK_CA_AFFINE,
                    "counting cost affine ceiling at both A endpoints",
                    lhs=worst_affine, rhs=CA_AFFINE_CEIL, err=1e-5,
                    notes=f"lnT={ln_T:.6g}"),
    ]


# ----------------------------------------------------------------------
# suboptimization records

_CHK_NU = register_check(
    "constants.nu_star",
    "free parameter in the exponential-over-linear factor minimizes at "
    "exactly three eighths")
_CHK_A1 = register_check(
    "constants.a1_value",
    "first assembled coefficient matches its stated value at the "
    "chosen knob")


def nu_star_check(tol: float = 1e-6):
    nu = golden_minimize(nu_objective, 0.05, 1.0, tol=1e-12)
    return equality_check(
        _CHK_NU, "minimizer equals 3/8", value=nu, target=0.375, tol=tol,
        err=1e-10, notes="golden section on (0.05, 1)")


def a1_value_check(tol: float = 0.5):
    return equality_check(
        _CHK_A1, "closed form at the stated knob matches the stated "
        "value", value=a1_of_kappa(KAPPA_STATED), target=A1_STATED,
        tol=tol, err=1e-9)


def suboptimize_all():
    return {
        "nu": golden_minimize(nu_objective, 0.05, 1.0, tol=1e-12),
        "kappa": golden_minimize(kappa_objective, 0.5, 3.0, tol=1e-12),
        "omega": golden_minimize(omega_objective, 0.5, 6.0, tol=1e-12),
        "omega_alt": golden_minimize(
            lambda w: omega_objective(w, 5.0 / 3.0), 0.5, 6.0, tol=1e-12),
    }


# ----------------------------------------------------------------------
# regime functions in log scale

def epsilon_ln(ln_x: float, divisor: float = PSI_DIVISOR) -> float:
    """log of the decay envelope at log x."""
    if ln_x <= 1.0:
        raise ValueError("need ln x > 1")
    u = (ln_x / math.log(ln_x)) ** (1.0 / 3.0)
    return math.log(EPSILON_COEFF) - u / divisor


def window_ln_T(ln_x: float) -> float:
    u = (ln_x / math.log(ln_x)) ** (1.0 / 3.0)
    return ln_x / 3.0 + u / WINDOW_DIVISOR


def zero_density_z(ln_T: float) -> float:
    return 1.0 / (ZERO_DENSITY_SCALE * ln_T ** (2.0 / 3.0)
                  * math.log(ln_T) ** (1.0 / 3.0))


def combined_Z(ln_x: float) -> float:
    return 1.0 / (COMBINED_SCALE * ln_x ** (2.0 / 3.0)
                  * math.log(ln_x) ** (2.0 / 3.0))


_CHK_WINDOW = register_check(
    "constants.window_ratio",
    "window height log stays under 0.34 log x at the stated regimes")
_CHK_Z_CHAIN = register_check(
    "constants.z_chain",
    "combined decay floor survives the window substitution")


def window_ratio_check():
    worst = -math.inf
    at = 0.0
    for ln_x in (LN_X0, LN_T0, LN_X_PI):
        r = window_ln_T(ln_x) / ln_x
        if r > worst:
            worst = r
            at = ln_x
    return bound_check(
        _CHK_WINDOW, "window log ratio under 0.34",
        lhs=worst, rhs=LOG_WINDOW_RATIO, err=1e-12,
        notes=f"worst at lnx={at:.6g}")


def z_chain_checks():
    scale = ZERO_DENSITY_SCALE * LOG_WINDOW_RATIO ** (2.0 / 3.0)
    recs = [bound_check(
        _CHK_Z_CHAIN,
        "substituted scale stays under the combined scale",
        lhs=scale, rhs=COMBINED_SCALE, err=1e-10,
        notes="58.51 * 0.34^(2/3)")]
    worst = -math.inf
    at = 0.0
    for ln_x in (LN_X0, LN_T0, LN_X_PI):
        r = combined_Z(ln_x) / zero_density_z(window_ln_T(ln_x))
        if r > worst:
            worst = r
            at = ln_x
    recs.append(bound_check(
        _CHK_Z_CHAIN,
        "combined floor under the window decay at the stated regimes",
        lhs=worst, rhs=1.0, err=1e-12,
        notes=f"worst at lnx={at:.6g}"))
    return recs


# ----------------------------------------------------------------------
# remainder absorption and the workable threshold

_CHK_ABSORB = register_check(
    "constants.remainder_absorption",
    "three extra remainder terms fit inside the single stated envelope")
_CHK_THRESHOLD = register_check(
    "constants.gap_threshold",
    "loglog x where the cube-gap chain first gives a positive count")


def absorption_excess(ln_x: float) -> float:
    """Relative excess of the full remainder display over the envelope
    alone, computed in log scale."""
    u = (ln_x / math.log(ln_x)) ** (1.0 / 3.0)
    shift = u * (1.0 / PSI_DIVISOR - 1.0 / ABSORB_DIVISOR)
    extra = sum(ABSORB_EXTRA) / EPSILON_COEFF * math.exp(shift)
    c2, c1, c0 = ABSORB_POLY
    ln_poly = math.log(c2 * ln_x ** 2 + c1 * ln_x + c0)
    ln_eps = epsilon_ln(ln_x)
    ln_poly_rel = ln_poly - ln_x - ln_eps
    poly = math.exp(ln_poly_rel) if ln_poly_rel > -700.0 else 0.0
    return extra + poly


def absorption_checks():
    recs = []
    # At the stated regime the excess exists but sits far below float
    # noise, so the strict claim lands indeterminate.
    excess = absorption_excess(LN_X_PI)
    recs.append(bound_check(
        _CHK_ABSORB,
        "relative excess over the envelope at the stated regime",
        lhs=excess, rhs=0.0, err=1e-15,
        notes=f"lnlnx=45; sum of positive terms always exceeds its "
              f"first term, excess={excess:.3g}"))
    for lnln in (15.0, 18.0):
        excess = absorption_excess(math.exp(lnln))
        recs.append(bound_check(
            _CHK_ABSORB,
            "relative excess over the envelope below the stated regime",
            lhs=excess, rhs=0.0, err=1e-15, diagnostic=True,
            notes=f"lnlnx={lnln:g}; probe outside hypothesis"))
    return recs


def gap_chain_margin(lnln_x: float) -> float:
    """Signed log margin of the per-cube count; positive means the
    chain certifies a prime between consecutive cubes."""
    ln_x = math.exp(lnln_x)
    ln_eps = epsilon_ln(3.0 * ln_x, PI_DIVISOR)
    if ln_eps >= 0.0:
        return -math.inf
    # count >= (x^2 / ln x)(1 - eps), in logs.
    return 2.0 * ln_x - math.log(ln_x) + math.log1p(-math.exp(ln_eps))


def gap_threshold_check():
    lo, hi = 2.0, 60.0
    if gap_chain_margin(lo) > 0 or gap_chain_margin(hi) < 0:
        raise AssertionError("threshold bracket lost")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if gap_chain_margin(mid) > 0:
            hi = mid
        else:
            lo = mid
    return bound_check(
        _CHK_THRESHOLD,
        "chain turns positive only above the stated loglog threshold",
        lhs=hi, rhs=15.0, err=1e-9, diagnostic=True,
        notes=(f"chain first positive at lnlnx={hi:.4f}; below that "
               "the displayed count bound is vacuous, not violated"))


# ----------------------------------------------------------------------
# the constant ledger

@dataclass(frozen=True)
class ConstantEntry:
    name: str
    computed: float | None
    stated: float | None
    status: str
    notes: str = ""

    @property
    def rel_deviation(self) -> float | None:
        if self.computed is None or self.stated in (None, 0.0):
            return None
        return abs(self.computed - self.stated) / abs(self.stated)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "computed": self.computed,
            "stated": self.stated,
            "rel_deviation": self.rel_deviation,
            "status": self.status,
            "notes": self.notes,
        }


@dataclass
class ConstantLedger:
    entries: list = field(default_factory=list)

    def add(self, name, computed, stated, notes=""):
        if computed is None or stated is None:
            status = "computed_only" if stated is None else "stated_only"
        else:
            rel = abs(computed - stated) / max(abs(stated), 1e-300)
            status = ("match" if rel <= 1e-6
                      else "close" if rel <= 5e-4 else "discrepancy")
        self.entries.append(
            ConstantEntry(name, computed, stated, status, notes))

    def note(self, name, status, notes):
        self.entries.append(ConstantEntry(name, None, None, status, notes))

    def as_dicts(self):
        return [e.as_dict() for e in self.entries]


def build_constant_ledger() -> ConstantLedger:
    led = ConstantLedger()
    opt = suboptimize_all()
    a1 = a1_of_kappa(KAPPA_STATED)
    a2 = a2_of_omega(OMEGA_STATED)
    led.add("first_coefficient", a1, A1_STATED,
            "closed form at the stated knob")
    led.add("second_coefficient", a2, A2_STATED,
            "closed form evaluates far below the stated value; the "
            "assembled density constant is reported from the computed "
            "column")
    led.add("nu_star", opt["nu"], NU_STATED, "exact minimizer is 3/8")
    led.add("kappa_star", opt["kappa"], KAPPA_STATED,
            "knob was rounded to three decimals")
    led.add("omega_star", opt["omega"], OMEGA_STATED,
            "minimizer under the 8 omega/3 reading; under 5 omega/3 it "
            f"moves to {opt['omega_alt']:.3f}")
    led.add("density_constant", density_constant(),
            DENSITY_CONSTANT_STATED,
            "assembled from computed coefficients; with the stated "
            f"second coefficient instead it reads "
            f"{density_constant(a2=A2_STATED):.2f}")
    led.add("counting_ratio", ca_value(LN_T0) / LN_T0, CA_RATIO_CEIL,
            "ratio at the density threshold, ceiling holds")
    exact_slope = 4.5 / CA_DENOM
    additive = max(ca_value(LN_T0, r) - exact_slope * LN_T0
                   for r in (1.0, 595.0 / 594.0))
    led.add("counting_affine", additive, CA_AFFINE_CEIL,
            "additive part against the exact slope 4.5/log(7/6) at the "
            "wide window endpoint; the stated ceiling is this value "
            "rounded up")
    led.add("combined_scale", ZERO_DENSITY_SCALE
            * LOG_WINDOW_RATIO ** (2.0 / 3.0), COMBINED_SCALE,
            "substituted decay scale, rounds up to the stated 28.51")
    led.add("window_divisor", 9.0 * COMBINED_SCALE, WINDOW_DIVISOR,
            "window knob is nine times the combined scale")
    led.add("gap_threshold_loglog", _threshold_value(), 15.0,
            "first loglog x where the cube-gap chain is non-vacuous")
    led.add("moment_third_log2", j_moment(1.0 / 3.0, 2)[0], 1.220,
            "stated ceiling matches the one-log moment instead")
    led.add("moment_fourthird_log2", j_moment(4.0 / 3.0, 2)[0], 1.881,
            "stated ceiling matches the one-log moment instead")
    led.note("count_bound_form", "editorially_resolved",
             "zero-count ceiling used in the clean one-sided form "
             "T log T / (2 pi) for T >= 6")
    led.note("density_window_term", "editorially_resolved",
             "window coefficient in the counting cost read as "
             "7.9 T / (2 pi A), agreeing with both stated occurrences")
    led.note("prime_count_scaling", "editorially_resolved",
             "prime-count gain keeps the 1/log x divisor; one stated "
             "variant omits it")
    led.note("exponent_placeholder", "editorially_resolved",
             "ambiguous exponent fraction in the combined decay floor "
             "resolved to 2/3, the weaker of the two readings")
    led.note("assembly_exponent", "editorially_resolved",
             "stated assembly disagrees between 8 omega/3 and "
             "5 omega/3; the constant definition with 5 omega/3 is "
             "followed, though the stated knob only minimizes the "
             "8 omega/3 reading and the alternative multiplies the "
             "main term by e^omega")
    led.note("psi_error_coefficients", "unresolved_placeholder",
             "two stated error coefficients carry literal question "
             "marks; the later clean values 5.26 and 33.488 are used")
    return led


def _threshold_value() -> float:
    lo, hi = 2.0, 60.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if gap_chain_margin(mid) > 0:
            hi = mid
        else:
            lo = mid
    return hi
