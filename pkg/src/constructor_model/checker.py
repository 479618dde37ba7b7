"""Constructor-theoretic predicates decided by enumeration over a finite model.

Results are memoised in `model.cache`, keyed by attribute member sets, so
that the nested quantifiers of bar, observability and superinformation do
not re-run the same possibility checks.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Hashable, Iterator, List, Mapping, Optional

from constructor_model.dynamics import compile_task
from constructor_model.model import (
    Attribute,
    CompositeSubstrate,
    FiniteTheoryModel,
    State,
    Task,
    Variable,
)

from errors import (
    AttributeOutsideBasisError,
    MissingBlankError,
    PreconditionError,
    SubstrateMismatchError,
)

logger = logging.getLogger(__name__)

TASK_TM_NAMING_NOTE = (
    "task is described as measuring X of the qubit but its pairs use the "
    "z attributes; the pairs are encoded as written"
)


def _memo(model: FiniteTheoryModel, key: Hashable, compute: Callable[[], bool]):
    try:
        return model.cache[key]
    except KeyError:
        value = model.cache[key] = compute()
        return value


def _members_key(x: Variable) -> tuple:
    return (x.substrate, tuple(a.members for a in x.attributes))


def is_possible(task: Task, model: FiniteTheoryModel) -> bool:
    """Some single declared map realizes every pair of the task."""
    substrate = model.substrate(task.substrate)
    pairs = compile_task(task, substrate)
    key = (
        "possible",
        task.substrate,
        tuple((s.members, t.members) for s, t in task.pairs),
    )
    return _memo(
        model,
        key,
        lambda: any(d.realizes(pairs) for d in model.dynamics_for(task.substrate)),
    )


def cloning_task(x: Variable, blank: Attribute, model: FiniteTheoryModel) -> Task:
    doubled = model.doubled(x.substrate)
    if doubled is None:
        raise PreconditionError(
            f"Cloning {x.label} needs the composite {x.substrate}+{x.substrate}"
        )
    pairs = [
        (
            model.product_attribute(doubled, (a, blank)),
            model.product_attribute(doubled, (a, a)),
        )
        for a in x.attributes
    ]
    return Task(doubled.id, pairs, name=f"clone {x.label}")


def permutation_tasks(x: Variable) -> Iterator[Task]:
    for image in itertools.permutations(x.attributes):
        pairs = list(zip(x.attributes, image))
        yield Task(x.substrate, pairs, name=f"permute {x.label}")


def _is_information_variable(
    x: Variable, blank: Attribute, model: FiniteTheoryModel
) -> bool:
    def compute() -> bool:
        if not is_possible(cloning_task(x, blank, model), model):
            return False
        return all(is_possible(task, model) for task in permutation_tasks(x))

    return _memo(model, ("information", _members_key(x), blank.members), compute)


def is_information_variable(
    x: Variable, model: FiniteTheoryModel, blank: Optional[Attribute] = None
) -> bool:
    """Cloning from the blank and every permutation of x's attributes are possible."""
    blank = blank or x.blank
    if blank is None:
        raise MissingBlankError(f"Variable {x.label} has no designated blank")
    if blank not in x.attributes:
        raise PreconditionError(f"Blank {blank.label} is not an attribute of {x.label}")
    return _is_information_variable(x, blank, model)


def is_information_variable_any_blank(x: Variable, model: FiniteTheoryModel) -> bool:
    """Information variable for at least one choice of blank."""
    return any(_is_information_variable(x, b, model) for b in x.attributes)


def _is_information_variable_declared(x: Variable, model: FiniteTheoryModel) -> bool:
    if x.blank is not None:
        return _is_information_variable(x, x.blank, model)
    return is_information_variable_any_blank(x, model)


def enumerate_variables(
    model: FiniteTheoryModel, substrate_id: str, size: Optional[int] = None
) -> List[Variable]:
    """Every set of pairwise disjoint basis attributes, smallest first."""
    basis = model.basis_for(substrate_id)
    sizes = [size] if size is not None else range(1, len(basis) + 1)
    variables = []
    for k in sizes:
        for combo in itertools.combinations(basis, k):
            if all(a.disjoint(b) for a, b in itertools.combinations(combo, 2)):
                variables.append(Variable(combo))
    return variables


def information_variables(
    model: FiniteTheoryModel, substrate_id: str, size: int
) -> List[Variable]:
    if model.doubled(substrate_id) is None:
        logger.debug("No doubled composite for %s", substrate_id)
        return []
    return [
        v
        for v in enumerate_variables(model, substrate_id, size)
        if is_information_variable_any_blank(v, model)
    ]


def is_maximal_information_variable(x: Variable, model: FiniteTheoryModel) -> bool:
    """No information variable over the basis has more attributes than x.

    Dropping attributes other than the blank from an information variable
    leaves an information variable, so checking one size up is enough.
    """
    return not information_variables(model, x.substrate, len(x) + 1)


def _distinguishable_on_substrate(x: Variable, model: FiniteTheoryModel) -> bool:
    for q in information_variables(model, x.substrate, len(x)):
        for image in itertools.permutations(q.attributes):
            task = Task(x.substrate, list(zip(x.attributes, image)))
            if is_possible(task, model):
                return True
    return False


def _distinguishable_into(
    x: Variable, target_id: str, model: FiniteTheoryModel
) -> bool:
    composite = model.composite_of(x.substrate, target_id)
    if composite is None:
        raise PreconditionError(
            f"Target {target_id} of {x.substrate} has no declared composite"
        )
    everything = model.whole(x.substrate)
    for q in information_variables(model, target_id, len(x)):
        for start in model.basis_for(target_id):
            inputs = [
                model.product_attribute(composite, (a, start)) for a in x.attributes
            ]
            for image in itertools.permutations(q.attributes):
                outputs = [
                    model.product_attribute(composite, (everything, b)) for b in image
                ]
                if is_possible(Task(composite.id, list(zip(inputs, outputs))), model):
                    return True
    return False


def is_distinguishable(x: Variable, model: FiniteTheoryModel) -> bool:
    """Some possible task maps x's attributes onto an information variable.

    The information variable is looked for on x's own substrate and on every
    target substrate the model declares for it.
    """
    key = ("distinguishable", x.substrate, frozenset(a.members for a in x.attributes))

    def compute() -> bool:
        if _distinguishable_on_substrate(x, model):
            return True
        return any(
            _distinguishable_into(x, target, model)
            for target in model.targets.get(x.substrate, ())
        )

    return _memo(model, key, compute)


def _bar_members(
    members: frozenset, substrate_id: str, model: FiniteTheoryModel
) -> frozenset:
    n = Attribute(substrate_id, members)
    found = frozenset()
    for a in model.basis_for(substrate_id):
        if a.disjoint(n) and is_distinguishable(Variable((n, a)), model):
            found |= a.members
    return found


def bar(n: Attribute, model: FiniteTheoryModel) -> Optional[Attribute]:
    """Union of the basis attributes distinguishable from n; None if there are none."""
    if not any(n.same_members(a) for a in model.basis_for(n.substrate)):
        raise AttributeOutsideBasisError(
            f"Attribute {n.label} is not in the basis of {n.substrate}"
        )
    members = _bar_members(n.members, n.substrate, model)
    if not members:
        return None
    return Attribute(n.substrate, members, f"bar({n.label})")


def _closed_under_double_bar(a: Attribute, model: FiniteTheoryModel) -> bool:
    once = _bar_members(a.members, a.substrate, model)
    if not once:
        return False
    return _bar_members(once, a.substrate, model) == a.members


def is_observable(x: Variable, model: FiniteTheoryModel) -> bool:
    """Information variable whose attributes all equal their double bar."""
    if not _is_information_variable_declared(x, model):
        return False
    return all(_closed_under_double_bar(a, model) for a in x.attributes)


def is_measurement_possible(x: Variable, model: FiniteTheoryModel) -> bool:
    """Perfect measurement: (x_i, x0) -> (x_i, p_i) for an information variable p."""
    doubled = model.doubled(x.substrate)
    if doubled is None:
        raise PreconditionError(
            f"Measuring {x.label} needs the composite {x.substrate}+{x.substrate}"
        )
    blanks = [x.blank] if x.blank is not None else list(x.attributes)
    for p in information_variables(model, x.substrate, len(x)):
        for blank in blanks:
            inputs = [
                model.product_attribute(doubled, (a, blank)) for a in x.attributes
            ]
            for image in itertools.permutations(p.attributes):
                outputs = [
                    model.product_attribute(doubled, (a, b))
                    for a, b in zip(x.attributes, image)
                ]
                if is_possible(Task(doubled.id, list(zip(inputs, outputs))), model):
                    return True
    return False


def is_superinformation_medium(
    model: FiniteTheoryModel, x: Variable, z: Variable
) -> bool:
    """x and z are observables and their union is not an information variable."""
    if x.substrate != z.substrate:
        raise SubstrateMismatchError(
            f"{x.label} and {z.label} live on {x.substrate} and {z.substrate}"
        )
    if not x.disjoint(z):
        raise PreconditionError(f"{x.label} and {z.label} share states")
    if not (is_observable(x, model) and is_observable(z, model)):
        return False
    return not is_information_variable_any_blank(x.union(z), model)


def is_local_map(
    mapping: Mapping[State, State], composite: CompositeSubstrate, acting: int
) -> bool:
    """Whether `mapping` acts as f x id with f on flat component `acting`.

    Checked on product states: each must go to a product state that differs
    only at `acting`, by a value that depends only on the input there.
    """
    local: dict = {}
    for state in composite.product_states:
        try:
            image = mapping[state]
        except KeyError:
            raise PreconditionError(f"Map has no image for {state!r}")
        if not isinstance(image, tuple) or len(image) != len(state):
            return False
        if image[:acting] + image[acting + 1 :] != state[:acting] + state[acting + 1 :]:
            return False
        if local.setdefault(state[acting], image[acting]) != image[acting]:
            return False
    return True


def product_variable(
    model: FiniteTheoryModel, x1: Variable, x2: Variable
) -> Variable:
    """X1 x X2 on the declared composite of the two substrates."""
    composite = model.composite_of(x1.substrate, x2.substrate)
    if composite is None:
        raise PreconditionError(
            f"No composite of {x1.substrate} and {x2.substrate} is declared"
        )
    attributes = [
        model.product_attribute(composite, (a, b))
        for a in x1.attributes
        for b in x2.attributes
    ]
    blank = None
    if x1.blank is not None and x2.blank is not None:
        blank = model.product_attribute(composite, (x1.blank, x2.blank))
    return Variable(attributes, name=f"{x1.label}x{x2.label}", blank=blank)


def check_interoperability(
    model: FiniteTheoryModel, x1: Variable, x2: Variable
) -> bool:
    """Whether X1 x X2 is an information variable of S1+S2."""
    product = product_variable(model, x1, x2)
    if model.doubled(product.substrate) is None:
        raise PreconditionError(
            f"Interoperability of {product.label} needs the composite "
            f"{product.substrate}+{product.substrate}"
        )
    return _is_information_variable_declared(product, model)


@dataclass(frozen=True)
class TaskTmResult:
    possible: bool
    task: Task
    naming_discrepancy: str = TASK_TM_NAMING_NOTE


def check_task_tm(
    model: FiniteTheoryModel, qubit: str, mediator: str, z: Variable, t: Variable
) -> TaskTmResult:
    """The copy task (z0, t0) -> (z0, t0), (z1, t0) -> (z1, t1) on qubit+mediator."""
    if (z.substrate, t.substrate) != (qubit, mediator):
        raise SubstrateMismatchError(
            f"Expected variables on {qubit} and {mediator}, "
            f"got {z.substrate} and {t.substrate}"
        )
    if len(z) != 2 or len(t) != 2:
        raise PreconditionError("The copy task needs two-valued z and t")
    composite = model.composite_of(qubit, mediator)
    if composite is None:
        raise PreconditionError(f"No composite of {qubit} and {mediator} is declared")
    (z0, z1), (t0, t1) = z.attributes, t.attributes
    pairs = [
        (
            model.product_attribute(composite, (z0, t0)),
            model.product_attribute(composite, (z0, t0)),
        ),
        (
            model.product_attribute(composite, (z1, t0)),
            model.product_attribute(composite, (z1, t1)),
        ),
    ]
    task = Task(composite.id, pairs, name="T_M")
    logger.info("Copy task on %s: %s", composite.id, TASK_TM_NAMING_NOTE)
    return TaskTmResult(possible=is_possible(task, model), task=task)


def is_sharp(observable: Variable, state: State) -> bool:
    """The state lies inside one attribute of the observable."""
    return any(state in a.members for a in observable.attributes)
