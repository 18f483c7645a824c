"""
Constants shared by the engine, the CLI and the Django adapter.
"""


class TailKind:
    """How a sequence continues beyond its finite center."""

    CONSTANT = "const"
    PERIODIC = "per"
    ARITHMETIC = "arith"

    @classmethod
    def get_all_kinds(cls):
        return [cls.CONSTANT, cls.PERIODIC, cls.ARITHMETIC]

    @classmethod
    def get_bounded_kinds(cls):
        return [cls.CONSTANT, cls.PERIODIC]


class AlphabetKind:
    FINITE = "fin"
    NATURALS = "nat"

    @classmethod
    def get_all_kinds(cls):
        return [cls.FINITE, cls.NATURALS]


class SpaceKind:
    FULL = "full"
    FORBIDDEN = "forbid"
    BUILTIN = "builtin"

    @classmethod
    def get_all_kinds(cls):
        return [cls.FULL, cls.FORBIDDEN, cls.BUILTIN]


class BuiltinSpace:
    """Named shift spaces whose membership is decided by a predicate."""

    INJECTIVE_WITH_ZERO = "injective-with-zero"
    ARRE_IMAGE = "arre-image"

    @classmethod
    def get_all_names(cls):
        return [cls.INJECTIVE_WITH_ZERO, cls.ARRE_IMAGE]


class RuleName:
    """CLI-facing names of the built-in morphisms."""

    SUM_WINDOW = "sum-window"
    TWO_POINT = "two-point"
    ZERO_LOCATOR = "zero-locator"
    ARRE = "arre"
    WINDOWED_PREFIX = "windowed:"

    @classmethod
    def get_builtin_names(cls):
        return [cls.SUM_WINDOW, cls.TWO_POINT, cls.ZERO_LOCATOR, cls.ARRE]

    @classmethod
    def get_data_dependent_names(cls):
        return [cls.SUM_WINDOW, cls.TWO_POINT, cls.ZERO_LOCATOR]


class Side:
    RIGHT = "right"
    LEFT = "left"
    BILATERAL = "bilateral"

    @classmethod
    def get_all_sides(cls):
        return [cls.RIGHT, cls.LEFT, cls.BILATERAL]


class FinitenessVerdict:
    FINITE = "finite"
    INFINITE = "infinite"
    INCONCLUSIVE = "inconclusive-at-bound"

    @classmethod
    def get_all_verdicts(cls):
        return [cls.FINITE, cls.INFINITE, cls.INCONCLUSIVE]


class DegreeVerdict:
    FINITE = "finite-with-witness"
    GROWING = "growing"
    INCONCLUSIVE = "inconclusive"

    @classmethod
    def get_all_verdicts(cls):
        return [cls.FINITE, cls.GROWING, cls.INCONCLUSIVE]


class DomainClass:
    """Shapes of dom(h_inf): bounded, all of Z, both sides, left, right."""

    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    C4 = "C4"
    C5 = "C5"

    @classmethod
    def get_all_classes(cls):
        return [cls.C1, cls.C2, cls.C3, cls.C4, cls.C5]


class ObservationTag:
    OBSERVED = "observed-at-truncation"
    CLOSED_FORM = "closed-form"

    @classmethod
    def get_all_tags(cls):
        return [cls.OBSERVED, cls.CLOSED_FORM]


class NiceVerdict:
    NICE = "nice-witness"
    NOT_NICE = "not-nice-witness"
    INCONCLUSIVE = "inconclusive"

    @classmethod
    def get_all_verdicts(cls):
        return [cls.NICE, cls.NOT_NICE, cls.INCONCLUSIVE]


class Evidence:
    """How strongly an example expectation is established."""

    EXACT = "exact"
    BOUNDED = "bounded-evidence"
    SAMPLED = "sampled"

    @classmethod
    def get_all_labels(cls):
        return [cls.EXACT, cls.BOUNDED, cls.SAMPLED]


class Outcome:
    PASS = "PASS"
    FAIL = "FAIL"
    ERROR = "ERROR"

    @classmethod
    def get_all_outcomes(cls):
        return [cls.PASS, cls.FAIL, cls.ERROR]

    @classmethod
    def get_problem_outcomes(cls):
        return [cls.FAIL, cls.ERROR]


class RunStatus:
    """Verification run status constants."""

    PENDING = "PENDING"
    STARTED = "STARTED"
    PASSED = "PASSED"
    FAILED = "FAILED"
    ERROR = "ERROR"

    @classmethod
    def get_all_statuses(cls):
        return [
            cls.PENDING,
            cls.STARTED,
            cls.PASSED,
            cls.FAILED,
            cls.ERROR,
        ]

    @classmethod
    def get_completed_statuses(cls):
        return [cls.PASSED, cls.FAILED, cls.ERROR]

    @classmethod
    def get_running_statuses(cls):
        return [cls.STARTED]
