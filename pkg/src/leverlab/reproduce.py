"""Known-answer reproduction of the two bundled worked demonstrations.

Each demonstration rebuilds its key from pinned material, reruns the scan
it illustrates, renders a canonical plain-text trace, and diffs the result
against the golden copies shipped with the package.
"""

from dataclasses import dataclass
import difflib
from fractions import Fraction
from importlib import resources

from .attacks import format_table1, liu_zhang_attack, liu_zhang_parameters
from .contfrac import EQ4, cf_expand, legendre_scan
from .numtheory import mod_inv
from .scheme import keygen

GOLDEN_VERSION = "v1"


@dataclass(frozen=True)
class WorkedExample:
    """Pinned key material plus the exact public elements it must yield."""

    name: str
    n: int
    P: int
    mode: str
    A: tuple
    W: int
    M: int
    ell: tuple
    C: tuple

    def build(self):
        return keygen(self.n, self.P, mode=self.mode,
                      A=self.A, W=self.W, ell=self.ell, M=self.M)


EXAMPLE1 = WorkedExample(
    name="example1",
    n=6,
    P=17,
    mode="legacy",
    A=(11, 10, 3, 7, 17, 13),
    W=17797,
    M=510931,
    ell=(9, 6, 10, 5, 7, 8),
    C=(113101, 79182, 175066, 433093, 501150, 389033),
)

EXAMPLE2 = WorkedExample(
    name="example2",
    n=10,
    P=437,
    mode="legacy",
    A=(437, 221, 77, 43, 37, 29, 41, 31, 15, 2),
    W=944516391,
    M=13082761331670077,
    ell=(11, 14, 13, 8, 10, 5, 9, 7, 12, 6),
    C=(
        3534250731208421,
        12235924019299910,
        8726060645493642,
        10110020851673707,
        2328792308267710,
        8425476748083036,
        6187583147203887,
        10200412235916586,
        9359330740489342,
        5977236088006743,
    ),
)


def decimal9(fr: Fraction) -> str:
    """Nine decimal places, exact integer rounding (half away from zero)."""
    scaled = (fr.numerator * 10**9 * 2 + fr.denominator) // (2 * fr.denominator)
    return f"{scaled // 10**9}.{scaled % 10**9:09d}"


def example1_trace() -> str:
    """Six-element key: one spurious small-denominator hit on triple (2,6,5)."""
    pub, priv = EXAMPLE1.build()
    m = int(pub.M)
    gz = pub.C[1] * pub.C[5] % m * mod_inv(pub.C[4], m) % m
    cf = cf_expand(gz, m)
    t = pub.n - 3  # two x-indices, one y-index
    hit = next(
        h for h in legendre_scan(gz, m, t, pub.P, EQ4) if h.convergent.q >= 2
    )
    conv = hit.convergent
    diff = abs(Fraction(gz, m) - Fraction(conv.p, conv.q))
    bound = Fraction(1, 2**t * conv.q**2)
    lines = [
        f"n {pub.n}",
        f"P {pub.P}",
        f"mode {pub.mode}",
        f"M {m}",
        "C " + " ".join(str(c) for c in pub.C),
        "x 2 6",
        "y 5",
        f"G_z {gz}",
        "cf " + " ".join(str(a) for a in cf.quotients),
        f"convergent {conv.p}/{conv.q}",
        f"candidate {conv.q}",
        f"difference {diff}",
        f"bound {bound}",
        f"difference_9dp {decimal9(diff)}",
        f"bound_9dp {decimal9(bound)}",
        f"within_bound {'true' if diff < bound else 'false'}",
        f"actual {priv.A[4]}",
        f"spurious {'true' if conv.q != priv.A[4] else 'false'}",
    ]
    return "\n".join(lines) + "\n"


def example2_outputs(jobs=1):
    """Ten-element key: the full denominator-jump scan and candidate table."""
    pub, _ = EXAMPLE2.build()
    _, u, delta, a_max = liu_zhang_parameters(pub.n, pub.M)
    report = liu_zhang_attack(pub, jobs=jobs)
    lines = [
        f"n {pub.n}",
        f"P {pub.P}",
        f"mode {pub.mode}",
        f"M {int(pub.M)}",
        "C " + " ".join(str(c) for c in pub.C),
        f"u {u}",
        f"Delta {delta}",
        f"A_max {a_max}",
        f"triples {report.hits}",
        f"rows {len(report.annotations)}",
    ]
    return "\n".join(lines) + "\n", format_table1(report)


def golden_text(name) -> str:
    path = resources.files("leverlab") / "golden" / GOLDEN_VERSION / name
    return path.read_text(encoding="ascii")


def compare_to_golden(name, text) -> str:
    """Unified diff against the shipped golden copy; empty when identical."""
    want = golden_text(name)
    if want == text:
        return ""
    return "\n".join(
        difflib.unified_diff(
            want.splitlines(), text.splitlines(),
            fromfile=f"golden/{name}", tofile="computed", lineterm="",
        )
    ) + "\n"


def run_example1():
    text = example1_trace()
    return text, compare_to_golden("example1_trace.txt", text)


def run_example2(jobs=1):
    trace, table = example2_outputs(jobs=jobs)
    diff = compare_to_golden("example2_trace.txt", trace)
    diff += compare_to_golden("example2_table1.txt", table)
    return trace + table, diff
