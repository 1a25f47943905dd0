import logging
from dataclasses import dataclass

from django.conf import settings

from graph_core.combinatorics import independence_number
from graph_core.spectral import lambda1

from .exceptions import Disconnected
from .params import CtmcParams

logger = logging.getLogger(__name__)


class Verdict:
    POSITIVE_RECURRENT = "PositiveRecurrent"
    NULL_RECURRENT = "NullRecurrent"
    TRANSIENT_NON_EXPLOSIVE = "TransientNonExplosive"
    TRANSIENT_EXPLOSIVE = "TransientExplosive"
    TRANSIENT_EXPLOSIVITY_UNKNOWN = "TransientExplosivityUnknown"

    CHOICES = [
        (POSITIVE_RECURRENT, "Положительно возвратная"),
        (NULL_RECURRENT, "Нуль-возвратная"),
        (TRANSIENT_NON_EXPLOSIVE, "Невозвратная, без взрыва"),
        (TRANSIENT_EXPLOSIVE, "Невозвратная, взрывная"),
        (TRANSIENT_EXPLOSIVITY_UNKNOWN, "Невозвратная, взрыв не установлен"),
    ]


@dataclass(frozen=True)
class Classification:
    """
    Вердикт классификации и величины, на которых он основан.

    Поля:
        verdict: одно из значений Verdict.
        case: метка ветви таблицы решений.
        lambda1, kappa, min_degree: λ_1(G), κ(G) (только при α=0, β<0), min d_v.
        source: "theorem" для X-интенсивностей, "inherited" для Y-варианта.
        critical_beta: −α/λ_1 при α < 0.
    """

    verdict: str
    case: str
    alpha: float
    beta: float
    lambda1: float = None
    kappa: int = None
    min_degree: int = None
    source: str = "theorem"
    critical_beta: float = None

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "case": self.case,
            "alpha": self.alpha,
            "beta": self.beta,
            "lambda1": self.lambda1,
            "kappa": self.kappa,
            "min_degree": self.min_degree,
            "source": self.source,
            "critical_beta": self.critical_beta,
        }


def spectral_radius(graph):
    """λ_1(G): точное значение для семейств, иначе степенной метод."""
    return lambda1(graph, use_closed_form=True)


def critical_beta(alpha, graph):
    """Критическое значение β = −α/λ_1(G) фазового перехода при α < 0."""
    if alpha >= 0:
        raise ValueError("Критическое β определено только при α < 0")
    return -alpha / spectral_radius(graph)


def _independent_case(alpha, n):
    if alpha < 0:
        return Verdict.POSITIVE_RECURRENT, "independent-alpha-negative"
    if alpha == 0:
        if n <= 2:
            return Verdict.NULL_RECURRENT, "independent-alpha-zero-low-dimension"
        return Verdict.TRANSIENT_NON_EXPLOSIVE, "independent-alpha-zero"
    return Verdict.TRANSIENT_EXPLOSIVE, "independent-alpha-positive"


def _negative_alpha_case(alpha, beta, lam, min_degree, tol):
    margin = alpha + beta * lam
    if abs(margin) <= tol:
        return Verdict.TRANSIENT_NON_EXPLOSIVE, "critical"
    if margin < 0:
        return Verdict.POSITIVE_RECURRENT, "subcritical"
    if alpha + beta * min_degree > tol:
        return Verdict.TRANSIENT_EXPLOSIVE, "supercritical-explosive"
    return Verdict.TRANSIENT_EXPLOSIVITY_UNKNOWN, "supercritical-conjectured-explosive"


def classify(alpha, beta, graph, variant=CtmcParams.X_RATES, tol=None):
    """
    Классификация процесса по таблице решений: возвратность, невозвратность и
    взрыв в зависимости от знаков α, β и величин λ_1(G), κ(G), min d_v(G).

    Граница α + βλ_1 = 0 считается достигнутой при
    |α + βλ_1| <= tol·max(|α|, |β|); для графов из семейств λ_1 берётся точно.

    Исключения:
        Disconnected: граф несвязен.
    """
    if not graph.is_connected:
        raise Disconnected(f"Граф {graph.label} несвязен")
    alpha, beta = float(alpha), float(beta)
    tol = (settings.CLASSIFY_BOUNDARY_TOL if tol is None else tol) * max(abs(alpha), abs(beta))
    lam = spectral_radius(graph) if graph.number_of_edges else None
    min_degree = graph.min_degree
    kappa = None
    critical = -alpha / lam if alpha < 0 and lam else None

    if beta == 0 or lam is None:
        verdict, case = _independent_case(alpha, graph.n)
    elif alpha > 0:
        verdict, case = Verdict.TRANSIENT_EXPLOSIVE, "alpha-positive"
    elif alpha == 0 and beta > 0:
        verdict, case = Verdict.TRANSIENT_EXPLOSIVE, "alpha-zero-attractive"
    elif alpha == 0:
        kappa = independence_number(graph)
        if kappa <= 2:
            verdict, case = Verdict.NULL_RECURRENT, "alpha-zero-repulsive-small-kappa"
        else:
            verdict, case = Verdict.TRANSIENT_NON_EXPLOSIVE, "alpha-zero-repulsive"
    else:
        verdict, case = _negative_alpha_case(alpha, beta, lam, min_degree, tol)

    source = "theorem" if variant == CtmcParams.X_RATES else "inherited"
    logger.info(f"Классификация ({alpha}, {beta}) на {graph.label}: {verdict} [{case}]")
    return Classification(
        verdict=verdict,
        case=case,
        alpha=alpha,
        beta=beta,
        lambda1=lam,
        kappa=kappa,
        min_degree=min_degree,
        source=source,
        critical_beta=critical,
    )
