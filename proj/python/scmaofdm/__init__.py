"""SCMA-OFDM link-level simulator and analytic BER evaluator.

Thin Python layer over the C++ core. The main entry points are:

- :class:`Scenario` — sweep configuration (presets ``fig3``/``fig4``/``fig5``,
  or parsed from the flat ``key = value`` scenario text format),
- :func:`run_sweep` — Monte Carlo + analytic BER sweep, returns
  ``(rows, csv_text)``,
- :func:`union_bound_ber` — analytic union-bound BER at one grid point,
- :func:`render_plot_svg` — deterministic SVG rendering of sweep CSVs,
- special functions and ICI helpers (:func:`kummer_u`, :func:`whittaker_w`,
  :func:`q_function`, :func:`ici_coefficient`, :func:`awgn_ici_variance`).
"""

from ._scmaofdm import (  # noqa: F401
    ConfigError,
    InputError,
    NumericsError,
    Scenario,
    ScmaSystem,
    SweepRow,
    awgn_ici_variance,
    ici_coefficient,
    kummer_u,
    q_function,
    render_plot_svg,
    run_sweep,
    union_bound_ber,
    whittaker_w,
)

__all__ = [
    "ConfigError",
    "InputError",
    "NumericsError",
    "Scenario",
    "ScmaSystem",
    "SweepRow",
    "awgn_ici_variance",
    "ici_coefficient",
    "kummer_u",
    "q_function",
    "render_plot_svg",
    "run_sweep",
    "union_bound_ber",
    "whittaker_w",
]
