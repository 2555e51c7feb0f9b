"""Walk the four bundled arrays through elimination, root counting and the rank verdict.

    python3 demos/fixtures_walkthrough.py
"""

from importlib import resources

from realrank import RankOptions, load_tensor, rank_auto, verify_decomposition


def load(name):
    return load_tensor(resources.files("realrank") / "fixtures" / f"{name}.json")


def show(name, **opts):
    X = load(name)
    r = rank_auto(X, RankOptions(**opts))
    roots = [f"{float(x):+.10f}" for x in r.roots.approximations()] if r.roots else []
    print(f"{name:9s} {str(X.shape):12s} {r.method:16s} degree={r.degree:<3d} "
          f"real={r.real_root_count}  {r.verdict}")
    if roots:
        print("          roots:", ", ".join(roots))
    if r.certificate is not None:
        ok, res = verify_decomposition(X, r.certificate)
        print(f"          certificate: {r.certificate.precision_bits} bits, residual {res:.1e}, ok={ok}")
    for note in r.notes:
        print("          note:", note)


if __name__ == "__main__":
    show("array_4x4x3")
    show("array_7x4x3")
    show("array_7x4x3", embed=True)
    show("indscal_4x3x3")
    show("indscal_7x4x4")
