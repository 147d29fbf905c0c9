"""Localizing small categories, and restriction along max as an equivalence."""
from simpkit.fixtures import category, category_presentation, endofunctor_fixtures
from simpkit.localization import localize_category, max_localization_report, stab_localization_report
from simpkit.textio import describe_category

L = localize_category(category_presentation("chain2"), ["g"]).materialize()
print("chain2 with g inverted:")
print(describe_category(L))

for name in ("arrow", "iso", "idempotent"):
    for size in (1, 2, 3):
        r = max_localization_report(list(range(size)), category(name))
        print(f"{name:10s} |I|={size}: Fun(Δ^I,D)={r.n_plain:4d} inverting={r.n_inverting:4d} "
              f"equivalence={r.equivalence} bijective={r.bijective}")

for fx in endofunctor_fixtures():
    r = stab_localization_report(fx.category, fx.marked, fx.functor)
    print(f"{fx.name}: stages {r.stages_plain}/{r.stages_localized}, "
          f"{r.colim_then_localize.n_arrows} arrows either way, isomorphic={r.isomorphic}")
