"""Figure presets: baseline operating point plus per-figure overrides.

Every preset resolves to a valid parameter set plus a sweep definition
without user input.  Multi-curve figures become one CSV with a leading
tag column identifying the curve.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError
from .params import SystemParams, apply_override, parse_config

#: Operating point used throughout: resonant detunings (all at the phonon
#: frequency), effective magnon-phonon coupling given directly.
BASELINE_CONFIG = """\
# baseline operating point, effective coupling mode
coupling_mode = effective
omega_0_hz = 10e9
omega_p_hz = 10e6
kappa_a_hz = 2.1e6
kappa_p_hz = 100
kappa_n1_hz = 0.1e6
kappa_n2_hz = 0.1e6
gamma_u_hz = 1e6
g1_hz = 1.5e6
g2_hz = 1.5e6
f_hz = 0
G_au_hz = 6e6
G_np_hz = 3.5e6
"""

#: Same operating point with the magnon-phonon coupling built up from the
#: single-magnon coupling and the drive field.
MICROSCOPIC_CONFIG = """\
# baseline operating point, microscopic coupling mode
coupling_mode = microscopic
omega_0_hz = 10e9
omega_p_hz = 10e6
kappa_a_hz = 2.1e6
kappa_p_hz = 100
kappa_n1_hz = 0.1e6
kappa_n2_hz = 0.1e6
gamma_u_hz = 1e6
g1_hz = 1.5e6
g2_hz = 1.5e6
f_hz = 0
G_au_hz = 6e6
g_np_hz = 1e-3
B_tesla = 3.3e-5
sphere_diameter_m = 250e-6
"""


def baseline_params() -> SystemParams:
    return parse_config(BASELINE_CONFIG)


def microscopic_params() -> SystemParams:
    return parse_config(MICROSCOPIC_CONFIG)


@dataclass(frozen=True)
class Preset:
    name: str
    kind: str                       # "spectrum" | "steady" | "delay"
    description: str
    microscopic: bool = False
    overrides: tuple = ()           # (config key, value) pairs, file units
    curve_key: str = "f_hz"         # config key varied across curves
    curve_values: tuple = ()        # file units (Hz)
    # spectrum sweeps: probe detuning grid in omega_p units
    grid: int = 2001
    lo: float = 0.0
    hi: float = 2.0
    # steady sweeps: drive field grid in tesla
    b_lo: float = 0.0
    b_hi: float = 5e-5
    b_points: int = 51
    # delay sweeps: coupling axis in omega_p units at fixed probe detuning
    sweep_param: str = "f"
    sweep_lo: float = 0.0
    sweep_hi: float = 0.3
    sweep_points: int = 121
    fixed_delta: float = 1.0        # omega_p units
    # group-delay differentiation step in omega_p units; presets whose
    # narrowest feature is the weakly dressed phonon line need a finer step
    fd_step: float = 1e-6

    def resolve(self) -> SystemParams:
        """Base parameters with this preset's overrides applied."""
        p = microscopic_params() if self.microscopic else baseline_params()
        for key, value in self.overrides:
            p = apply_override(p, key, value)
        return p


_F_CURVES = (0.0, 1.0e6, 1.5e6, 2.0e6)            # 0, 0.1, 0.15, 0.2 omega_p
_GAU_CURVES = (0.0, 3.0e6, 4.0e6, 6.0e6)

# coupling combinations of the transparency-window figures (file units)
_ONE_WINDOW = (("g1_hz", 0.0), ("G_np_hz", 0.0), ("g2_hz", 1.2e6))
_TWO_WINDOWS = (("g1_hz", 0.0), ("G_np_hz", 1.2e6), ("g2_hz", 1.2e6))
_THREE_WINDOWS = (("g1_hz", 1.2e6), ("G_np_hz", 1.2e6), ("g2_hz", 1.2e6))
_FANO_DETUNED = (("delta_n1_hz", 8e6), ("delta_n2_hz", 8e6))
_DELAY_COUPLINGS = (("g1_hz", 0.0), ("g2_hz", 1.2e6), ("G_np_hz", 1.2e6))


def _spectrum(name, desc, combo, *, gau_curves=False, extra=(), **kw) -> Preset:
    if gau_curves:
        overrides = combo + (("f_hz", 1.5e6),) + extra
        return Preset(name=name, kind="spectrum", description=desc,
                      overrides=overrides, curve_key="G_au_hz",
                      curve_values=_GAU_CURVES, **kw)
    overrides = combo + (("G_au_hz", 0.0),) + extra
    return Preset(name=name, kind="spectrum", description=desc,
                  overrides=overrides, curve_key="f_hz",
                  curve_values=_F_CURVES, **kw)


def _build_presets() -> dict[str, Preset]:
    presets = {}

    presets["fig2a"] = Preset(
        name="fig2a", kind="steady", microscopic=True,
        description="steady magnon number vs drive field, one curve per "
                    "tunnelling coupling",
        overrides=(("g1_hz", 1.2e6), ("g2_hz", 1.2e6)),
        curve_key="f_hz", curve_values=_F_CURVES)
    presets["fig2b"] = Preset(
        name="fig2b", kind="steady", microscopic=True,
        description="steady magnon number vs drive field, one curve per "
                    "atom-photon coupling",
        overrides=(("g1_hz", 1.2e6), ("g2_hz", 1.2e6), ("f_hz", 1.5e6)),
        curve_key="G_au_hz", curve_values=_GAU_CURVES)

    presets["fig3a"] = _spectrum(
        "fig3a", "single transparency window vs tunnelling", _ONE_WINDOW)
    presets["fig3b"] = _spectrum(
        "fig3b", "double transparency window vs tunnelling", _TWO_WINDOWS)
    presets["fig3c"] = _spectrum(
        "fig3c", "triple transparency window vs tunnelling", _THREE_WINDOWS)

    presets["fig4a"] = _spectrum(
        "fig4a", "single window vs atom-photon coupling", _ONE_WINDOW,
        gau_curves=True)
    presets["fig4b"] = _spectrum(
        "fig4b", "double window vs atom-photon coupling", _TWO_WINDOWS,
        gau_curves=True)
    presets["fig4c"] = _spectrum(
        "fig4c", "triple window vs atom-photon coupling", _THREE_WINDOWS,
        gau_curves=True)

    for name, b in (("fig5a", 2e-5), ("fig5b", 3.3e-5), ("fig5c", 5e-5)):
        presets[name] = Preset(
            name=name, kind="spectrum", microscopic=True,
            description=f"absorption vs tunnelling at B = {b * 1e3:g} mT "
                        "(drive-built coupling)",
            overrides=(("B_tesla", b),),
            curve_key="f_hz", curve_values=_F_CURVES, grid=4001,
            fd_step=1e-7)

    presets["fig6a"] = _spectrum(
        "fig6a", "Fano lineshapes vs tunnelling (magnons detuned from the "
        "phonon)", _THREE_WINDOWS, extra=_FANO_DETUNED)
    presets["fig6b"] = _spectrum(
        "fig6b", "Fano lineshapes vs atom-photon coupling (magnons detuned "
        "from the phonon)", _THREE_WINDOWS, gau_curves=True,
        extra=_FANO_DETUNED)

    presets["fig7a"] = Preset(
        name="fig7a", kind="spectrum",
        description="transmission vs tunnelling",
        overrides=_THREE_WINDOWS + (("G_au_hz", 0.0),),
        curve_key="f_hz", curve_values=(2.0e6, 2.5e6, 3.0e6, 3.5e6))
    presets["fig7b"] = Preset(
        name="fig7b", kind="spectrum",
        description="transmission vs atom-photon coupling",
        overrides=_THREE_WINDOWS + (("f_hz", 1.5e6),),
        curve_key="G_au_hz", curve_values=(0.0, 1.5e6, 3.0e6, 6.0e6))

    presets["fig8a"] = Preset(
        name="fig8a", kind="delay",
        description="group delay vs tunnelling at the phonon-resonant probe",
        overrides=_DELAY_COUPLINGS,
        curve_key="G_au_hz", curve_values=(0.0, 3.0e6, 6.0e6),
        sweep_param="f", sweep_lo=0.0, sweep_hi=0.3, sweep_points=121)
    presets["fig8b"] = Preset(
        name="fig8b", kind="delay",
        description="group delay vs atom-photon coupling at the "
                    "phonon-resonant probe",
        overrides=_DELAY_COUPLINGS + (("G_au_hz", 0.0),),
        curve_key="f_hz", curve_values=(0.0, 3.0e6),
        sweep_param="G_au", sweep_lo=0.0, sweep_hi=0.6, sweep_points=121)

    # dispersion panels share their absorption siblings' data: the CSV
    # carries both the real and imaginary output-field columns
    for alias, target in (("fig3d", "fig3a"), ("fig3e", "fig3b"),
                          ("fig3f", "fig3c"), ("fig4d", "fig4a"),
                          ("fig4e", "fig4b"), ("fig4f", "fig4c")):
        presets[alias] = presets[target]
    return presets


PRESETS = _build_presets()


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(
            f"unknown preset {name!r}; available: "
            f"{', '.join(sorted(PRESETS))}") from None
