import re
from typing import Annotated, Dict, FrozenSet, List, Literal, Optional, Tuple, Union

import networkx as nx
from pydantic import (
    AfterValidator,
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeInt,
    StrictInt,
    field_serializer,
    model_validator,
)

from app.core.config import StateMode
from app.core.exceptions import CyclicPrecedence

_WHITESPACE = re.compile(r"\s+")


def normalize_text(value: str) -> str:
    """Collapse whitespace and lowercase; the form every descriptive string is compared in"""
    return _WHITESPACE.sub(" ", value).strip().lower()


def _descriptive(value: str) -> str:
    text = normalize_text(value)
    if not text:
        raise ValueError("descriptive string must not be empty")
    return text


def _trimmed(value: str) -> str:
    return _WHITESPACE.sub(" ", value).strip()


DescriptiveString = Annotated[str, AfterValidator(_descriptive)]
StateWord = Annotated[str, AfterValidator(normalize_text)]
Direction = Annotated[str, AfterValidator(_trimmed)]

# An indicator is either False (action disabled) or the action's duration in seconds
Indicator = Union[Literal[False], Annotated[StrictInt, Field(gt=0)]]


class Process(BaseModel):
    """Rewrite step from a set of descriptive strings to another"""
    model_config = ConfigDict(frozen=True)

    id: str = Field(min_length=1)
    input: FrozenSet[DescriptiveString]
    output: FrozenSet[DescriptiveString]
    time: NonNegativeInt
    f_time: NonNegativeInt = 0
    direction: Direction = ""
    label: Optional[str] = None

    @model_validator(mode="after")
    def _check_times_and_sets(self) -> "Process":
        if self.f_time > self.time:
            raise ValueError(f"f_time {self.f_time} exceeds time {self.time}")
        if not self.input:
            raise ValueError("input must not be empty")
        if not self.output:
            raise ValueError("output must not be empty")
        return self

    @field_serializer("input", "output")
    def _sorted_strings(self, value: FrozenSet[str]) -> List[str]:
        return sorted(value)

    @property
    def is_ghost(self) -> bool:
        return self.time == 0 and self.f_time == 0 and self.direction == ""

    @property
    def name(self) -> str:
        """Label when one was given, otherwise the id"""
        return self.label or self.id


class FoodClass(BaseModel):
    """Root + state + per-action indicators"""
    model_config = ConfigDict(frozen=True)

    root: DescriptiveString
    state: StateWord = ""
    indicators: Dict[str, Indicator] = {}

    def key(self) -> Tuple[str, str, Tuple[Tuple[str, Union[bool, int]], ...]]:
        return self.root, self.state, tuple(sorted(self.indicators.items()))


class CookingActionSpec(BaseModel):
    """Data definition of a cooking action such as chop, boil or fry"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = Field(min_length=1)
    state_word: StateWord
    direction_template: str
    extra_inputs: FrozenSet[DescriptiveString] = frozenset()
    active_seconds: Optional[NonNegativeInt] = None
    disables: FrozenSet[str] = frozenset()

    @model_validator(mode="before")
    @classmethod
    def _disable_self(cls, data):
        if isinstance(data, dict) and "name" in data:
            data = dict(data)
            data["disables"] = frozenset(data.get("disables") or ()) | {data["name"]}
        return data

    @model_validator(mode="after")
    def _check_template(self) -> "CookingActionSpec":
        try:
            self.direction_template.format(root="x", seconds=0)
        except (KeyError, IndexError, ValueError) as e:
            raise ValueError(f"direction_template may only use {{root}} and {{seconds}}: {e}")
        return self

    @field_serializer("extra_inputs", "disables")
    def _sorted_strings(self, value: FrozenSet[str]) -> List[str]:
        return sorted(value)


class Synonym(BaseModel):
    """New vocabulary name defined by descriptive strings already understood"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    name: DescriptiveString
    definition: FrozenSet[DescriptiveString] = Field(min_length=1)

    @model_validator(mode="after")
    def _name_not_in_definition(self) -> "Synonym":
        if self.name in self.definition:
            raise ValueError(f"synonym '{self.name}' cannot appear in its own definition")
        return self


class KnowledgeBase(BaseModel):
    """can_make + skills; skills order is the deterministic tie-break order"""
    model_config = ConfigDict(frozen=True)

    can_make: FrozenSet[DescriptiveString] = frozenset()
    skills: Tuple[Process, ...] = ()

    @model_validator(mode="after")
    def _check_closure(self) -> "KnowledgeBase":
        seen = set()
        for process in self.skills:
            if process.id in seen:
                raise ValueError(f"duplicate process id '{process.id}'")
            seen.add(process.id)
            missing = (process.input | process.output) - self.can_make
            if missing:
                raise ValueError(f"process '{process.id}' uses strings outside can_make: {sorted(missing)}")
        return self

    def producers(self, item: str) -> List[Process]:
        """Every skill whose output contains item, in skills order"""
        return [p for p in self.skills if item in p.output]


class SelectedContent(BaseModel):
    """Ingredients taken from supplies and the processes that make the dish"""
    model_config = ConfigDict(frozen=True)

    ingred_list: Tuple[DescriptiveString, ...] = ()
    action_list: Tuple[Process, ...] = ()


class InsufficientIngredients(BaseModel):
    """Strings that are neither in supplies nor producible"""
    model_config = ConfigDict(frozen=True)

    needed: Tuple[DescriptiveString, ...] = Field(min_length=1)

    @model_validator(mode="after")
    def _sorted_unique(self) -> "InsufficientIngredients":
        if list(self.needed) != sorted(set(self.needed)):
            raise ValueError("needed must be sorted and free of duplicates")
        return self

    @property
    def message(self) -> str:
        return "Insufficient ingredients, you need:\n" + "\n".join(self.needed)


class RequiresGraph(BaseModel):
    """requires(a, b) edges over process ids; nodes keep action_list order"""
    model_config = ConfigDict(frozen=True)

    nodes: Tuple[str, ...] = ()
    edges: FrozenSet[Tuple[str, str]] = frozenset()

    @model_validator(mode="after")
    def _edges_within_nodes(self) -> "RequiresGraph":
        known = set(self.nodes)
        if len(known) != len(self.nodes):
            raise ValueError("graph nodes must be unique")
        for a, b in self.edges:
            if a not in known or b not in known:
                raise ValueError(f"edge ({a}, {b}) references a node outside the graph")
        digraph = self.to_digraph()
        if not nx.is_directed_acyclic_graph(digraph):
            raise CyclicPrecedence(nx.find_cycle(digraph))
        return self

    def to_digraph(self) -> nx.DiGraph:
        """networkx view with an arc a -> b for every requires(a, b)"""
        digraph = nx.DiGraph()
        digraph.add_nodes_from(self.nodes)
        digraph.add_edges_from(sorted(self.edges))
        return digraph

    @field_serializer("edges")
    def _sorted_edges(self, value: FrozenSet[Tuple[str, str]]) -> List[Tuple[str, str]]:
        return sorted(value)

    def requires(self, a: str, b: str) -> bool:
        return (a, b) in self.edges


class PermissibleOrder(BaseModel):
    """A linear extension of the requires relation"""
    model_config = ConfigDict(frozen=True)

    order: Tuple[str, ...]


class Combination(BaseModel):
    """Host process with bare insertees performed during its free time"""
    model_config = ConfigDict(frozen=True)

    host: Process
    host_original_direction: str
    insertees: Tuple[Process, ...] = Field(min_length=1)
    remaining_f_time: NonNegativeInt

    @model_validator(mode="after")
    def _check_capacity(self) -> "Combination":
        used = sum(q.time for q in self.insertees)
        if used > self.host.f_time:
            raise ValueError(f"insertees need {used}s but '{self.host.id}' is free for {self.host.f_time}s")
        if self.remaining_f_time != self.host.f_time - used:
            raise ValueError("remaining_f_time must equal host f_time minus insertee times")
        return self

    @property
    def id(self) -> str:
        return self.host.id

    @property
    def time(self) -> int:
        return self.host.time

    @property
    def members(self) -> Tuple[Process, ...]:
        return (self.host,) + self.insertees

    @property
    def input(self) -> FrozenSet[str]:
        return frozenset().union(*(p.input for p in self.members))

    @property
    def output(self) -> FrozenSet[str]:
        return frozenset().union(*(p.output for p in self.members))


PlanItem = Union[Process, Combination]


class RecipePlan(BaseModel):
    """Ordered plan items; a bare Process or a Combination"""
    model_config = ConfigDict(frozen=True)

    items: Tuple[PlanItem, ...] = ()

    @property
    def processes(self) -> List[Process]:
        flat: List[Process] = []
        for item in self.items:
            flat.extend(item.members if isinstance(item, Combination) else (item,))
        return flat


class PassiveInterval(BaseModel):
    """Window during which the cook is free"""
    model_config = ConfigDict(frozen=True)

    start: NonNegativeInt
    end: NonNegativeInt
    activity: str

    @model_validator(mode="after")
    def _ordered(self) -> "PassiveInterval":
        if self.start >= self.end:
            raise ValueError("passive interval must have start < end")
        return self


class RenderedRecipe(BaseModel):
    """Everything printed for one dish"""
    model_config = ConfigDict(frozen=True)

    title: str
    total: NonNegativeInt
    ingredients: Tuple[str, ...] = ()
    instructions: Tuple[Tuple[NonNegativeInt, str], ...] = ()
    passives: Tuple[PassiveInterval, ...] = ()


class OracleReport(BaseModel):
    """Optimizer against exhaustive search on one instance"""
    model_config = ConfigDict(frozen=True)

    instance_id: str
    optimizer_makespan: NonNegativeInt
    oracle_makespan: NonNegativeInt
    witness_plan: RecipePlan
    optimizer_plan: Optional[RecipePlan] = None
    agrees: bool

    @model_validator(mode="after")
    def _consistent(self) -> "OracleReport":
        if self.agrees != (self.optimizer_makespan == self.oracle_makespan):
            raise ValueError("agrees must reflect makespan equality")
        if self.oracle_makespan > self.optimizer_makespan:
            raise ValueError("oracle makespan exceeds the optimizer's; the oracle search is incomplete")
        return self


# File records

class FoodRecord(BaseModel):
    """Food class as written in a KB file"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    root: DescriptiveString
    state: StateWord = ""
    indicators: Dict[str, Indicator] = {}


class SynonymRecord(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    definition: List[str] = Field(min_length=1)


class ProcessRecord(BaseModel):
    """Hand-specified process; ids are assigned on load in file order"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    label: Optional[str] = None
    input: List[str] = Field(min_length=1)
    output: List[str] = Field(min_length=1)
    time: NonNegativeInt
    f_time: NonNegativeInt = 0
    direction: str = ""


class KnowledgeBaseFile(BaseModel):
    """Declarative knowledge base (format 1)"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    format: Literal[1]
    state_mode: Optional[StateMode] = None
    actions: List[CookingActionSpec] = []
    foods: List[FoodRecord] = []
    synonyms: List[SynonymRecord] = []
    processes: List[ProcessRecord] = []

    @model_validator(mode="after")
    def _unique_foods(self) -> "KnowledgeBaseFile":
        seen = set()
        for index, food in enumerate(self.foods):
            pair = (food.root, food.state)
            if pair in seen:
                name = f"{food.state} {food.root}".strip()
                raise ValueError(f"foods.{index}: duplicate food class '{name}'")
            seen.add(pair)
        return self


class DatabaseFile(BaseModel):
    """Compiled knowledge base written by `produce`"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    format: Literal[1]
    can_make: List[str]
    skills: List[Process]


# Pipeline results

class PlanOutcome(BaseModel):
    """Result of a successful planning query"""
    model_config = ConfigDict(frozen=True)

    content: SelectedContent
    graph: RequiresGraph
    plan: RecipePlan
    total: NonNegativeInt
    recipe: RenderedRecipe


class OrdersSummary(BaseModel):
    """Compressed total time of every permissible order"""
    model_config = ConfigDict(frozen=True)

    makespans: Tuple[NonNegativeInt, ...]

    @property
    def count(self) -> int:
        return len(self.makespans)

    @property
    def minimum(self) -> int:
        return min(self.makespans)

    @property
    def maximum(self) -> int:
        return max(self.makespans)
