import re

from hypothesis import settings

settings.register_profile("default", deadline=None)
settings.load_profile("default")

CRITERIA = {
    "01": "conjugacy of the circle maps",
    "02": "elliptic/hyperbolic thresholds in K",
    "03": "fixed and switched ray counts",
    "04": "Moebius trace bound",
    "05": "dilatation blow-up",
    "06": "fixed-ray fixed points",
    "07": "plane decomposition",
    "08": "circle Julia dichotomy",
    "09": "Boettcher conjugacy",
    "10": "CLI determinism",
}

_PAT = re.compile(r"test_criterion_(\d{2})")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    stats = terminalreporter.stats
    results: dict[str, bool] = {}
    for key in ("passed", "failed", "error"):
        for rep in stats.get(key, []):
            m = _PAT.search(getattr(rep, "nodeid", ""))
            if not m:
                continue
            cid = m.group(1)
            results[cid] = results.get(cid, True) and key == "passed"
    if not results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for cid in sorted(CRITERIA):
        if cid in results:
            status = "PASS" if results[cid] else "FAIL"
            terminalreporter.write_line(
                f"criterion {cid} ({CRITERIA[cid]}): {status}"
            )
