"""Barycentric subdivision, Ex levels of a nerve, and the max map into Ex_eq."""
from simpkit.category import isomorphism_edges
from simpkit.ex import MarkedEdgeSet, ex_eq_level, ex_level, m_image
from simpkit.fixtures import category, fixture_nerve
from simpkit.subdivision import sd_simplex

for n in range(1, 5):
    X = sd_simplex(n)
    print(f"sd(Δ^{n}): nondegenerate counts {X.nondegenerate_counts()}")

for name in ("arrow", "iso", "split_idempotent"):
    X = fixture_nerve(name)
    marked = MarkedEdgeSet(X, isomorphism_edges(X))
    print(f"\n{name}: {category(name).n_arrows} arrows, gaunt={category(name).is_gaunt()}")
    for k in range(3):
        plain, eq = len(ex_level(X, k)), len(ex_eq_level(X, k, marked))
        nondeg = [s for s in range(X.count(k)) if not X.is_degenerate(k, s)]
        images = {m_image(X, k, s).images for s in nondeg}
        print(f"  level {k}: Ex {plain:4d}  Ex_eq {eq:4d}  nondegenerate {len(nondeg):3d}  distinct m-images {len(images)}")
