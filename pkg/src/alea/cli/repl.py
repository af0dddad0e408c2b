"""Interactive session.

Each input line is either a command or a program fragment.  Bindings made at
top level (``x := e``) persist for the rest of the session: later lines are
evaluated as if preceded by every earlier binding, so a bound random draw is
made once and shared by all its uses, exactly like ``let`` inside a program.
"""

from __future__ import annotations

import sys
from typing import TextIO

from ..engine import DEFAULT_SEED, check_program, eval_det, eval_dist, sample
from ..errors import AleaError
from ..frontend import desugar, parse
from ..frontend import surface as S
from ..values import render
from .render import analysis_report, frequency_table

HELP = """\
commands:
  e            show the value of e, or its distribution if e is random
  x := e       bind x for the rest of the session (a random e is drawn once)
  :t e         inferred type of e
  :d e         exact distribution of e
  :s n e       n pseudo-random samples of e
  :seed n      restart the generator from seed n
  :bindings    list the session's bindings
  :reset       forget all bindings
  :q           quit"""


class Session:
    def __init__(self, seed: int = DEFAULT_SEED, ascii: bool = False):
        self.bindings: list = []  # (name, surface expression)
        self.seed = seed
        self.ascii = ascii

    # --- program assembly ---------------------------------------------------------

    def program(self, text: str):
        """Parse ``text``; returns (new bindings, result node, whether the result is implicit)."""
        node = parse(text)
        if isinstance(node, S.Block):
            return list(node.bindings), node.result, node.implicit
        return [], node, False

    def compile(self, bindings: list, result: S.Node):
        all_bindings = tuple(self.bindings + bindings)
        node = S.Block(all_bindings, result) if all_bindings else result
        core = desugar(node)
        return check_program({}, core)

    # --- commands -------------------------------------------------------------------

    def execute(self, line: str) -> str | None:
        """Run one input line and return the text to show; None means quit."""
        line = line.strip()
        if not line or line.startswith("--"):
            return ""
        try:
            return self._execute(line)
        except AleaError as err:
            return f"error: {err}"
        except ValueError as err:  # malformed number in a command
            return f"error: {err}"

    def _execute(self, line: str) -> str | None:
        if line.startswith(":"):
            cmd, _, rest = line.partition(" ")
            rest = rest.strip()
            if cmd in (":q", ":quit"):
                return None
            if cmd in (":h", ":help"):
                return HELP
            if cmd == ":reset":
                self.bindings = []
                return "bindings cleared"
            if cmd == ":bindings":
                return "\n".join(name for name, _ in self.bindings) or "(none)"
            if cmd == ":seed":
                self.seed = int(rest, 0)
                return f"seed {self.seed}"
            if cmd == ":t":
                t, _ = self.compile(*self.program(rest)[:2])
                return str(t)
            if cmd == ":d":
                t, e = self.compile(*self.program(rest)[:2])
                return analysis_report(eval_dist({}, e), str(t), self.ascii)
            if cmd == ":s":
                count, _, expr = rest.partition(" ")
                n = int(count)
                if n < 1:
                    return "error: the number of samples must be positive"
                _, e = self.compile(*self.program(expr)[:2])
                values = sample({}, e, n, self.seed)
                shown = ", ".join(render(v, self.ascii) for v in values[:20])
                more = f", ... ({n} samples)" if n > 20 else ""
                return f"{shown}{more}\n{frequency_table(values, self.ascii)}"
            return f"error: unknown command {cmd} (try :help)"
        bindings, result, implicit = self.program(line)
        t, e = self.compile(bindings, result)
        self.bindings.extend(bindings)
        if implicit:
            return f"{bindings[-1][0]} : {t}"
        if e.det:
            return render(eval_det({}, e), self.ascii)
        return analysis_report(eval_dist({}, e), str(t), self.ascii)


def run(inp: TextIO = sys.stdin, out: TextIO = sys.stdout, seed: int = DEFAULT_SEED, ascii: bool = False) -> int:
    session = Session(seed, ascii)
    interactive = inp.isatty()
    if interactive:
        print("Alea session; :help lists commands, :q quits.", file=out)
    while True:
        if interactive:
            print("alea> ", end="", file=out, flush=True)
        line = inp.readline()
        if not line:
            return 0
        reply = session.execute(line)
        if reply is None:
            return 0
        if reply:
            print(reply, file=out, flush=True)
