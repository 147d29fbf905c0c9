"""Liouville fields of movie forms λ_M + σ ds + dh."""
from simpkit.fixtures import MOVIE_FIXTURES
from simpkit.forms import liouville_field, movie_chart, movie_form, parse_form, verify_movie_field_formula

for h, lam in MOVIE_FIXTURES[:6]:
    lam_M = parse_form(lam)
    chart = movie_chart(lam_M, h)
    form = movie_form(lam_M, h, chart)
    print(f"h = {h}")
    print(f"  λ = {form.human()}")
    print(f"  v = {liouville_field(form, chart).human(chart)}")
    print(f"  fiber part matches σ + ∂h/∂s: {verify_movie_field_formula(h, lam_M, chart)}")
