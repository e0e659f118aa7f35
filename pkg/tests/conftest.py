def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS, _line
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k, ok, detail in sorted(RESULTS):
        terminalreporter.write_line(_line(k, ok, detail))
