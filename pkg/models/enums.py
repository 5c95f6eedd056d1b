from enum import Enum, IntEnum


class FactorKind(Enum):
    """
    Enum class for the kind of an elementary group factor.
    """

    Z: str = "Z"
    R: str = "R"
    ZMOD: str = "Zmod"
    POWER: str = "Rpow"


class PointNorm(Enum):
    """
    Enum class for the norms a point cloud can be measured with.
    """

    L1: str = "l1"
    LINF: str = "linf"


class Collinearity(Enum):
    """
    Enum class for the verdict on a zero-mean triple.
    """

    COLLINEAR: str = "collinear"
    NONCOLLINEAR: str = "noncollinear"
    TRIVIAL: str = "trivial"


class ExitCode(IntEnum):
    """
    Enum class for the process exit codes of the command line.
    """

    OK: int = 0
    PROPERTY_FALSE: int = 1
    INVALID_INPUT: int = 2
    BUDGET: int = 3
    INTERNAL: int = 4
