"""Line-oriented text format for goal-directed MDPs.

Grammar (UTF-8, '#' starts a comment, tokens whitespace-separated)::

    mdp <num_states> <num_actions> <discount>
    goal <state>
    done <state>
    t <s> <a> <s'> <p>        # one sparse transition entry per line
    r <s> <a> <value>         # nonzero rewards only

The writer emits probabilities and rewards with 17 significant digits so a
write/parse round trip reproduces every float64 bit-exactly. The parser
validates stochasticity, duplicates, and index ranges, reporting the
offending line number.
"""
from __future__ import annotations

import numpy as np

from .mdp import SparseMdp
from .problems import GoalDirectedMdp


class MdpFileError(ValueError):
    """Parse or validation failure, carrying the 1-based line number."""

    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_mdp_file(m: GoalDirectedMdp) -> str:
    mdp = m.mdp
    lines = [
        f"mdp {mdp.num_states} {mdp.num_actions} {_fmt(mdp.discount)}",
        f"goal {m.goal}",
        f"done {m.done}",
    ]
    for s in range(mdp.num_states):
        for a in range(mdp.num_actions):
            for sp, p in mdp.successors(s, a):
                lines.append(f"t {s} {a} {sp} {_fmt(p)}")
    for s in range(mdp.num_states):
        for a in range(mdp.num_actions):
            rv = mdp.reward(s, a)
            if rv != 0.0:
                lines.append(f"r {s} {a} {_fmt(rv)}")
    return "\n".join(lines) + "\n"


def _parse_int(token: str, lineno: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise MdpFileError(lineno, f"expected integer {what}, got {token!r}") from None


def _parse_real(token: str, lineno: int, what: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise MdpFileError(lineno, f"expected real {what}, got {token!r}") from None


def parse_mdp_file(text: str) -> GoalDirectedMdp:
    header = None
    header_line = 0
    goal = done = None
    # (s, a) -> list of (successor, probability); first_line anchors errors
    entries: dict[tuple[int, int], list[tuple[int, float]]] = {}
    first_line: dict[tuple[int, int], int] = {}
    reward_entries: dict[tuple[int, int], float] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind = tokens[0]

        if header is None:
            if kind != "mdp":
                raise MdpFileError(lineno, f"expected 'mdp' header, got {kind!r}")
            if len(tokens) != 4:
                raise MdpFileError(lineno, "header must be: mdp <num_states> <num_actions> <discount>")
            ns = _parse_int(tokens[1], lineno, "state count")
            na = _parse_int(tokens[2], lineno, "action count")
            gamma = _parse_real(tokens[3], lineno, "discount")
            if ns < 1 or na < 1:
                raise MdpFileError(lineno, "state and action counts must be >= 1")
            if not (0.0 <= gamma < 1.0):
                raise MdpFileError(lineno, f"discount must satisfy 0 <= discount < 1, got {gamma!r}")
            header = (ns, na, gamma)
            header_line = lineno
            continue

        ns, na, gamma = header
        if kind == "goal" or kind == "done":
            if len(tokens) != 2:
                raise MdpFileError(lineno, f"'{kind}' line must be: {kind} <state>")
            idx = _parse_int(tokens[1], lineno, "state index")
            if not (0 <= idx < ns):
                raise MdpFileError(lineno, f"{kind} state {idx} out of range (num_states={ns})")
            if kind == "goal":
                goal = idx
            else:
                done = idx
        elif kind == "t":
            if len(tokens) != 5:
                raise MdpFileError(lineno, "transition line must be: t <s> <a> <s'> <p>")
            s = _parse_int(tokens[1], lineno, "state index")
            a = _parse_int(tokens[2], lineno, "action index")
            sp = _parse_int(tokens[3], lineno, "successor index")
            p = _parse_real(tokens[4], lineno, "probability")
            if not (0 <= s < ns):
                raise MdpFileError(lineno, f"state index {s} out of range (num_states={ns})")
            if not (0 <= a < na):
                raise MdpFileError(lineno, f"action index {a} out of range (num_actions={na})")
            if not (0 <= sp < ns):
                raise MdpFileError(lineno, f"successor index {sp} out of range (num_states={ns})")
            if p < 0.0:
                raise MdpFileError(lineno, f"negative probability {p!r}")
            key = (s, a)
            group = entries.setdefault(key, [])
            if any(sp == prev_sp for prev_sp, _ in group):
                raise MdpFileError(lineno, f"duplicate successor {sp} for state {s} action {a}")
            if key not in first_line:
                first_line[key] = lineno
            if p != 0.0:
                group.append((sp, p))
        elif kind == "r":
            if len(tokens) != 4:
                raise MdpFileError(lineno, "reward line must be: r <s> <a> <value>")
            s = _parse_int(tokens[1], lineno, "state index")
            a = _parse_int(tokens[2], lineno, "action index")
            val = _parse_real(tokens[3], lineno, "reward")
            if not (0 <= s < ns):
                raise MdpFileError(lineno, f"state index {s} out of range (num_states={ns})")
            if not (0 <= a < na):
                raise MdpFileError(lineno, f"action index {a} out of range (num_actions={na})")
            reward_entries[(s, a)] = val
        else:
            raise MdpFileError(lineno, f"unknown line kind {kind!r}")

    if header is None:
        raise MdpFileError(1, "empty file: missing 'mdp' header")
    ns, na, gamma = header
    if goal is None:
        raise MdpFileError(header_line, "missing 'goal' line")
    if done is None:
        raise MdpFileError(header_line, "missing 'done' line")

    for s in range(ns):
        for a in range(na):
            group = entries.get((s, a), [])
            total = sum(p for _, p in group)
            if abs(total - 1.0) > 1e-9:
                raise MdpFileError(
                    first_line.get((s, a), header_line),
                    f"probabilities for state {s} action {a} sum to {total!r}, not 1")

    transitions = [[sorted(entries.get((s, a), [])) for a in range(na)] for s in range(ns)]
    rewards = np.zeros((ns, na))
    for (s, a), val in reward_entries.items():
        rewards[s, a] = val
    mdp = SparseMdp(ns, na, transitions, rewards, gamma)
    return GoalDirectedMdp(mdp=mdp, goal=goal, done=done)
