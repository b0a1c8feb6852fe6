"""Collects one pass/fail line per acceptance criterion."""

LINES: list[str] = []


def record(number: int, passed: bool, detail: str) -> None:
    line = f"CRITERION {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
    LINES.append(line)
    print(line)
