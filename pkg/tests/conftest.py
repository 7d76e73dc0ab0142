import hypothesis
from hypothesis import strategies as st

from resolvent_limits import Atom, DensityFamily, SpectralMeasure, WeightFunction

hypothesis.settings.register_profile(
    "default", max_examples=40, deadline=None, derandomize=True
)
hypothesis.settings.load_profile("default")

finite = st.floats(allow_nan=False, allow_infinity=False)


@st.composite
def density_families(draw, signed=False):
    kind = draw(st.sampled_from(["constant", "affine", "power_bump", "smooth_bump"]))
    level = draw(st.floats(0.0, 2.0))
    lo = draw(st.floats(-2.0, 0.5))
    hi = draw(st.floats(lo + 0.25, lo + 2.5))
    if kind == "constant":
        return DensityFamily(kind, {"level": level}, (lo, hi))
    if kind == "affine":
        slope = draw(st.floats(-1.0, 1.0)) if signed else draw(st.floats(0.0, 1.0))
        base = level if signed else level + abs(slope) * (hi - lo)  # keep >= 0 on support
        return DensityFamily(kind, {"level": base, "slope": slope, "center": lo}, (lo, hi))
    if kind == "power_bump":
        center = draw(st.floats(lo, hi))
        expo = draw(st.floats(0.1, 1.0))
        return DensityFamily(
            kind, {"level": level, "exponent": expo, "center": center}, (lo, hi)
        )
    center = 0.5 * (lo + hi)
    return DensityFamily(
        kind, {"level": level, "center": center, "half_width": 0.5 * (hi - lo)}
    )


@st.composite
def weight_functions(draw):
    kind = draw(st.sampled_from(["hat", "cosine_bump", "power_hat", "plateau"]))
    center = draw(st.floats(-1.0, 1.0))
    half_width = draw(st.floats(0.3, 2.0))
    params = {"center": center, "half_width": half_width}
    if kind == "power_hat":
        params["exponent"] = draw(st.floats(0.1, 1.0))
    return WeightFunction(kind, params)


@st.composite
def spectral_measures(draw, max_parts=2, max_atoms=2):
    parts = draw(st.lists(density_families(), min_size=0, max_size=max_parts))
    n_atoms = draw(st.integers(0, max_atoms))
    locs = sorted(
        draw(
            st.lists(
                st.floats(-2.0, 2.0),
                min_size=n_atoms,
                max_size=n_atoms,
                unique=True,
            )
        )
    )
    atoms = tuple(Atom(loc, draw(st.floats(0.1, 2.0))) for loc in locs)
    return SpectralMeasure(ac_parts=tuple(parts), atoms=atoms)
