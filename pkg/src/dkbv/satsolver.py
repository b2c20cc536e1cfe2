"""A small CDCL propositional solver used by the knot search.

Literals are non-zero ints (``v`` / ``-v``).  Clauses may be added between
calls to ``solve``; learned clauses are kept, so repeated queries against
the same clause set under different assumptions get cheaper.
"""
from __future__ import annotations

import heapq
from typing import Iterable, Optional, Sequence


class SatSolver:
    def __init__(self):
        self.nvars = 0
        self.clauses: list = []
        self.watches: list = [[], []]    # indexed by literal code
        self.value: list = [0, 0]        # per literal code: 1 true, -1 false, 0 free
        self.level: list = [0]
        self.reason: list = [None]
        self.activity: list = [0.0]
        self.phase: list = [False]
        self.trail: list = []
        self.trail_lim: list = []
        self.qhead = 0
        self.inc = 1.0
        self.heap: list = []
        self.ok = True
        self.conflicts = 0
        self.model: Optional[list] = None

    # literal codes: 2*v for v, 2*v+1 for -v
    @staticmethod
    def _code(lit: int) -> int:
        return 2 * lit if lit > 0 else -2 * lit + 1

    def new_var(self) -> int:
        self.nvars += 1
        self.watches += [[], []]
        self.value += [0, 0]
        self.level.append(0)
        self.reason.append(None)
        self.activity.append(0.0)
        self.phase.append(False)
        heapq.heappush(self.heap, (0.0, self.nvars))
        return self.nvars

    def add_clause(self, lits: Iterable[int]) -> bool:
        if not self.ok:
            return False
        if self.trail_lim:
            self._cancel_until(0)
        seen, clause = set(), []
        for lit in lits:
            c = self._code(lit)
            if c ^ 1 in seen:
                return True
            if c in seen:
                continue
            val = self.value[c]
            if val == 1 and self.level[c >> 1] == 0:
                return True
            if val == -1 and self.level[c >> 1] == 0:
                continue
            seen.add(c)
            clause.append(c)
        if not clause:
            self.ok = False
            return False
        if len(clause) == 1:
            if self.value[clause[0]] == -1:
                self.ok = False
                return False
            if self.value[clause[0]] == 0:
                self._enqueue(clause[0], None)
            if self._propagate() is not None:
                self.ok = False
                return False
            return True
        self._attach(clause)
        return True

    def _attach(self, clause: list) -> int:
        idx = len(self.clauses)
        self.clauses.append(clause)
        self.watches[clause[0] ^ 1].append(idx)
        self.watches[clause[1] ^ 1].append(idx)
        return idx

    def _enqueue(self, code: int, reason) -> None:
        self.value[code] = 1
        self.value[code ^ 1] = -1
        v = code >> 1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(code)

    def _propagate(self):
        """Unit propagation; returns a conflicting clause index or None."""
        value, clauses, watches = self.value, self.clauses, self.watches
        while self.qhead < len(self.trail):
            p = self.trail[self.qhead]
            self.qhead += 1
            # clauses watching the literal that just became false (p ^ 1)
            ws = watches[p]
            false_lit = p ^ 1
            i = j = 0
            n = len(ws)
            while i < n:
                ci = ws[i]
                i += 1
                c = clauses[ci]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], false_lit
                first = c[0]
                if value[first] == 1:
                    ws[j] = ci
                    j += 1
                    continue
                for k in range(2, len(c)):
                    if value[c[k]] != -1:
                        c[1], c[k] = c[k], false_lit
                        watches[c[1] ^ 1].append(ci)
                        break
                else:
                    ws[j] = ci
                    j += 1
                    if value[first] == -1:
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        self.qhead = len(self.trail)
                        return ci
                    self._enqueue(first, ci)
            del ws[j:]
        return None

    def _analyze(self, confl: int):
        seen = set()
        learnt = [0]
        counter = 0
        p = None
        idx = len(self.trail) - 1
        cur = len(self.trail_lim)
        clause = self.clauses[confl]
        while True:
            for q in clause:
                if p is not None and q == p:
                    continue
                v = q >> 1
                if v not in seen and self.level[v] > 0:
                    seen.add(v)
                    self._bump(v)
                    if self.level[v] >= cur:
                        counter += 1
                    else:
                        learnt.append(q)
            while (self.trail[idx] >> 1) not in seen:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            seen.discard(p >> 1)
            counter -= 1
            if counter == 0:
                break
            clause = self.clauses[self.reason[p >> 1]]
        learnt[0] = p ^ 1
        if len(learnt) == 1:
            back = 0
        else:
            best = max(range(1, len(learnt)), key=lambda k: self.level[learnt[k] >> 1])
            learnt[1], learnt[best] = learnt[best], learnt[1]
            back = self.level[learnt[1] >> 1]
        self.inc *= 1.05
        return learnt, back

    def _bump(self, v: int) -> None:
        self.activity[v] += self.inc
        if self.activity[v] > 1e100:
            self.activity = [a * 1e-100 for a in self.activity]
            self.inc *= 1e-100
            self.heap = [(-self.activity[u], u) for u in range(1, self.nvars + 1)]
            heapq.heapify(self.heap)
            return
        heapq.heappush(self.heap, (-self.activity[v], v))

    def _cancel_until(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        start = self.trail_lim[lvl]
        for code in self.trail[start:]:
            v = code >> 1
            self.phase[v] = (code & 1) == 0
            self.value[code] = 0
            self.value[code ^ 1] = 0
            self.reason[v] = None
            heapq.heappush(self.heap, (-self.activity[v], v))
        del self.trail[start:]
        del self.trail_lim[lvl:]
        self.qhead = len(self.trail)

    def _pick(self) -> Optional[int]:
        heap, value = self.heap, self.value
        while heap:
            _, v = heapq.heappop(heap)
            if value[2 * v] == 0:
                return 2 * v if self.phase[v] else 2 * v + 1
        for v in range(1, self.nvars + 1):
            if value[2 * v] == 0:
                return 2 * v if self.phase[v] else 2 * v + 1
        return None

    def solve(self, assumptions: Sequence[int] = ()) -> bool:
        self.model = None
        if not self.ok:
            return False
        self._cancel_until(0)
        if self._propagate() is not None:
            self.ok = False
            return False
        assume = [self._code(a) for a in assumptions]
        restart_at, budget = 100, 100
        while True:
            confl = self._propagate()
            if confl is not None:
                self.conflicts += 1
                if not self.trail_lim:
                    self.ok = False
                    return False
                learnt, back = self._analyze(confl)
                self._cancel_until(back)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    ci = self._attach(learnt)
                    self._enqueue(learnt[0], ci)
                budget -= 1
                continue
            if budget <= 0:
                restart_at = int(restart_at * 1.5)
                budget = restart_at
                self._cancel_until(0)
                continue
            lvl = len(self.trail_lim)
            if lvl < len(assume):
                a = assume[lvl]
                if self.value[a] == -1:
                    self._cancel_until(0)
                    return False
                self.trail_lim.append(len(self.trail))
                if self.value[a] == 0:
                    self._enqueue(a, None)
                continue
            nxt = self._pick()
            if nxt is None:
                self.model = [False] + [self.value[2 * v] == 1 for v in range(1, self.nvars + 1)]
                self._cancel_until(0)
                return True
            self.trail_lim.append(len(self.trail))
            self._enqueue(nxt, None)
