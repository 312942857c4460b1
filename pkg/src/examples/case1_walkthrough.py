import sys

from latnoether import case1_lattice, classify, flabby_resolution, lambda_lattice, rho_invertible, verify_case1_iso
from latnoether.paper_models import case3_iso, cyclotomic_identity

DEFAULT_PRIME = 5


def main():
    """Walk through the case 1 lattice for one odd prime."""
    p = int(sys.argv[1]) if len(sys.argv) > 1 else DEFAULT_PRIME
    print(f"Case 1 lattice for p = {p}")

    M = case1_lattice(p)
    print(f"rank M = {M.rank}, group order = {M.group.order}")
    print(f"Phi_p(T^2) = Phi_p(T) Phi_2p(T): {cyclotomic_identity(p)}")

    iso = verify_case1_iso(p)
    print(f"Lambda -> M intertwiner found, det = {iso.matrix.det()}")
    print(f"Lambda has rank {lambda_lattice(p).rank}")

    report = classify(M)
    print("\n--- COHOMOLOGY ---")
    for entry in report.entries:
        print(f"{entry.key}: H^-1 = {entry.hat_minus1}, H^0 = {entry.hat0}, H^1 = {entry.h1}")

    resolution = flabby_resolution(M)
    print("\n--- FLABBY RESOLUTION ---")
    print(f"0 -> M({M.rank}) -> P({resolution.P.rank}) -> E({resolution.E.rank}) -> 0")

    verdict = rho_invertible(M)
    print("\n--- RHO ---")
    print(f"{verdict.invertible.verdict}: {getattr(verdict.invertible, 'reason', '')}")
    if verdict.conclusion:
        print(verdict.conclusion)

    if p == 3:
        print("\n--- CASE 3 ---")
        print(f"M + M against Lambda + Lambda: {case3_iso(p).verdict}")


if __name__ == "__main__":
    main()
