"""Line-oriented reports shared by the CLI subcommands."""

from __future__ import annotations

from dataclasses import dataclass, field

HEADER = "arrowlab-report v1"


def fmt_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "unknown"
    if isinstance(value, float) and value == float("inf"):
        return "inf"
    if isinstance(value, (list, tuple)):
        return " ".join(fmt_value(v) for v in value)
    return str(value)


@dataclass
class Report:
    command: str
    headline: str
    exit_code: int = 0
    fields: list[tuple[str, str]] = field(default_factory=list)
    blocks: list[tuple[str, str]] = field(default_factory=list)

    def add(self, key: str, value) -> Report:
        self.fields.append((key, fmt_value(value)))
        return self

    def block(self, name: str, text: str) -> Report:
        self.blocks.append((name, text if text.endswith("\n") or not text else text + "\n"))
        return self

    def render(self, fmt: str = "text") -> str:
        if fmt == "structured":
            lines = [HEADER, f"command: {self.command}", f"result: {self.headline}"]
            lines += [f"{k}: {v}" for k, v in self.fields]
            out = "\n".join(lines) + "\n"
            for name, text in self.blocks:
                out += f"begin {name}\n{text}end {name}\n"
            return out
        lines = [self.headline] + [f"  {k}: {v}" for k, v in self.fields]
        out = "\n".join(lines) + "\n"
        for name, text in self.blocks:
            out += f"## {name}\n{text}"
        return out


def format_coloring(coloring) -> str:
    return "".join(f"c {i} {c}\n" for i, c in enumerate(coloring))


def parse_coloring(text: str, m: int) -> tuple[int, ...]:
    colors: dict[int, int] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if len(toks) != 3 or toks[0] != "c" or toks[2] not in ("0", "1"):
            raise ValueError(f"line {lineno}: expected 'c <edge-index> <0|1>'")
        i = int(toks[1])
        if not 0 <= i < m or i in colors:
            raise ValueError(f"line {lineno}: bad or repeated edge index {i}")
        colors[i] = int(toks[2])
    if len(colors) != m:
        raise ValueError(f"coloring covers {len(colors)} of {m} edges")
    return tuple(colors[i] for i in range(m))
