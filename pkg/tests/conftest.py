ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, secs, limit, note = ACCEPTANCE[n]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status} ({secs:.2f} s, limit {limit} s) {note}")
