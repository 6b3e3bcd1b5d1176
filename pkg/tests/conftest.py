def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance verdict lines after the run, past output capture."""
    lines = set()
    for reports in terminalreporter.stats.values():
        for rep in reports:
            if getattr(rep, "when", None) != "call":
                continue
            for _, content in getattr(rep, "sections", []):
                for line in content.splitlines():
                    if line.startswith("ACCEPTANCE"):
                        lines.add(line)
    if lines:
        terminalreporter.section("acceptance verdicts")
        for line in sorted(lines):
            terminalreporter.write_line(line)
