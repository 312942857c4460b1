import os

from tabulate import tabulate

from latnoether.paper_models import suite

PRIMES = [3, 5, 7, 11]


def main():
    """Run the per-prime checks in parallel and print one row per prime."""
    jobs = int(os.environ.get("LATNOETHER_JOBS", "4"))
    print(f"Checking primes {', '.join(map(str, PRIMES))} with {jobs} workers...")

    results = suite(PRIMES, jobs)
    checks = list(next(iter(results.values())))
    rows = [[p] + [results[p][name] for name in checks] for p in PRIMES]
    print(tabulate(rows, headers=["p"] + checks, tablefmt="grid"))


if __name__ == "__main__":
    main()
