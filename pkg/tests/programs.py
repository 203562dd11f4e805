"""Random source programs for property tests."""

from __future__ import annotations

import random

REL = ["<", "<=", ">", ">=", "==", "!="]
ARITH = ["+", "-", "*"]


class ProgramGen:
    def __init__(self, seed: int, params: int = 2, changes: int = 0, division: bool = False):
        self.rng = random.Random(seed)
        self.params = [f"p{i}" for i in range(params)]
        self.locals: list[str] = []
        self.changes_left = changes
        self.division = division
        self.loops = 0
        self.fresh = 0

    def var(self) -> str:
        return self.rng.choice(self.params + self.locals)

    def atom(self) -> str:
        if self.rng.random() < 0.6:
            return self.var()
        return str(self.rng.randint(-5, 5))

    def arith(self, depth: int = 0) -> str:
        r = self.rng.random()
        if depth >= 2 or r < 0.35:
            e = self.atom()
        elif r < 0.45:
            e = f"-{self.atom()}"
        else:
            op = self.rng.choice(ARITH + (["/", "%"] if self.division else []))
            right = str(self.rng.randint(1, 4)) if op == "*" else self.arith(depth + 1)
            e = f"({self.arith(depth + 1)} {op} {right})"
        return self.maybe_change(e, self.arith_alt)

    def arith_alt(self) -> str:
        return self.rng.choice([self.atom(), f"({self.atom()} + {self.rng.randint(1, 3)})"])

    def cond(self, depth: int = 0) -> str:
        r = self.rng.random()
        if depth < 1 and r < 0.2:
            op = self.rng.choice(["&&", "||"])
            return f"({self.cond(depth + 1)} {op} {self.cond(depth + 1)})"
        if depth < 1 and r < 0.28:
            return f"!({self.cond(depth + 1)})"
        e = f"{self.arith(1)} {self.rng.choice(REL)} {self.atom()}"
        return self.maybe_change(e, lambda: f"{self.atom()} {self.rng.choice(REL)} {self.atom()}")

    def maybe_change(self, text: str, alt) -> str:
        if self.changes_left and "change(" not in text and self.rng.random() < 0.25:
            self.changes_left -= 1
            other = alt()
            return f"change({text}, {other})" if self.rng.random() < 0.5 else f"change({other}, {text})"
        return text

    def stmt(self, depth: int, indent: str) -> list[str]:
        r = self.rng.random()
        if r < 0.35 or not self.locals:
            if not self.locals or self.rng.random() < 0.3:
                name = f"v{self.fresh}"
                self.fresh += 1
                line = f"{indent}int {name} = {self.arith()};"
                self.locals.append(name)
                return [line]
            return [f"{indent}{self.rng.choice(self.locals)} = {self.arith()};"]
        if r < 0.65 and depth < 2:
            out = [f"{indent}if ({self.cond()}) {{"]
            out += self.block(depth + 1, indent + "  ")
            if self.rng.random() < 0.5:
                out.append(f"{indent}}} else {{")
                out += self.block(depth + 1, indent + "  ")
            out.append(f"{indent}}}")
            return out
        if r < 0.75 and depth < 2 and self.loops < 2:
            self.loops += 1
            i = f"k{self.loops}"
            out = [f"{indent}int {i} = 0;", f"{indent}while ({i} < {self.rng.randint(1, 3)} && {self.cond(1)}) {{"]
            out += self.block(depth + 1, indent + "  ")
            out.append(f"{indent}  {i} = {i} + 1;")
            out.append(f"{indent}}}")
            return out
        if r < 0.85:
            return [f"{indent}assert({self.cond()});"]
        if depth > 0 and r < 0.92:
            return [f"{indent}return {self.arith()};"]
        return [f"{indent}{self.var() if self.locals else self.params[0]} = {self.arith()};"] if self.locals else []

    def block(self, depth: int, indent: str) -> list[str]:
        saved = list(self.locals)
        out: list[str] = []
        for _ in range(self.rng.randint(1, 3)):
            out += self.stmt(depth, indent)
        self.locals = saved
        return out

    def program(self) -> str:
        body: list[str] = []
        for _ in range(self.rng.randint(3, 6)):
            body += self.stmt(0, "  ")
        body.append(f"  return {self.arith()};")
        params = ", ".join(f"int {p}" for p in self.params)
        return f"int f({params}) {{\n" + "\n".join(body) + "\n}\n"


def random_program(seed: int, params: int = 2, changes: int = 0, division: bool = False) -> str:
    return ProgramGen(seed, params, changes, division).program()
