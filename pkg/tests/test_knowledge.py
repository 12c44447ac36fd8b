import pytest
from pydantic import ValidationError

from app.core.config import StateMode
from app.core.exceptions import DuplicateProcessId, IndicatorDisabled, UnknownAction
from app.models.schemas import CookingActionSpec, FoodClass, Process, Synonym
from app.services.knowledge import (
    BOIL,
    BUILTIN_ACTIONS,
    CHOP,
    FRY,
    apply_action,
    description,
    merge_actions,
    produce_content,
)


def potato() -> FoodClass:
    return FoodClass(root="potato", state="raw", indicators={"chop": 60, "fry": 420, "boil": 600})


def expand_by_hand(fc: FoodClass, actions):
    """Every process reachable by any sequence of actions, without the worklist"""
    found = {}

    def walk(current: FoodClass):
        for action in actions:
            if current.indicators.get(action.name, False) is False:
                continue
            generated, successor = apply_action(action, current)
            found[generated.id] = generated
            walk(successor)

    walk(fc)
    return found


class TestDescription:
    """Descriptions of food classes"""

    def test_state_prefixes_root(self):
        """State and root are joined by a single space"""
        assert description(FoodClass(root="carrot", state="raw")) == "raw carrot"
        assert description(FoodClass(root="carrot", state="chopped")) == "chopped carrot"

    def test_empty_state_is_root_alone(self):
        """A class without state is described by its root"""
        assert description(FoodClass(root="water")) == "water"

    def test_strings_are_normalized(self):
        """Case and repeated whitespace are folded"""
        assert description(FoodClass(root="Coconut   Milk", state=" ")) == "coconut milk"


class TestApplyAction:
    """Single cooking action applications"""

    def test_chop_carrot(self):
        """Chopping is fully active and disables further chopping"""
        fc = FoodClass(root="carrot", state="raw", indicators={"chop": 120})

        generated, successor = apply_action(CHOP, fc)

        assert generated.input == {"raw carrot"}
        assert generated.output == {"chopped carrot"}
        assert generated.time == 120
        assert generated.f_time == 0
        assert generated.direction == "chop the carrot"
        assert generated.label == "chop_carrot"
        assert successor.state == "chopped"
        assert successor.indicators["chop"] is False

    def test_boil_lentils_needs_boiling_water(self):
        """Boiling leaves all but 30 seconds free and embeds the duration in the direction"""
        fc = FoodClass(root="lentils", indicators={"boil": 2700})

        generated, _ = apply_action(BOIL, fc)

        assert generated.input == {"lentils", "boiling water"}
        assert generated.output == {"boiled lentils"}
        assert generated.time == 2700
        assert generated.f_time == 2670
        assert generated.direction == "boil the lentils for 2700"

    def test_fry_disables_boil(self):
        """Frying leaves all but 120 seconds free and rules out boiling afterwards"""
        fc = FoodClass(root="onion", state="raw", indicators={"fry": 420, "boil": 300})

        generated, successor = apply_action(FRY, fc)

        assert (generated.time, generated.f_time) == (420, 300)
        assert successor.indicators == {"fry": False, "boil": False}

    def test_short_boil_clamps_free_time(self):
        """A boil shorter than its active part has no free time"""
        fc = FoodClass(root="egg", indicators={"boil": 20})

        generated, _ = apply_action(BOIL, fc)

        assert generated.f_time == 0

    def test_disabled_indicator_raises(self):
        """Applying a disabled action is an error"""
        fc = FoodClass(root="carrot", state="chopped", indicators={"chop": False})

        with pytest.raises(IndicatorDisabled, match="chopped carrot"):
            apply_action(CHOP, fc)

    def test_missing_indicator_counts_as_disabled(self):
        fc = FoodClass(root="water", indicators={})

        with pytest.raises(IndicatorDisabled):
            apply_action(FRY, fc)

    def test_prepend_mode_accumulates_states(self):
        """Prepend mode keeps the previous state after the new one"""
        fc = FoodClass(root="carrot", state="peeled", indicators={"chop": 120})

        generated, successor = apply_action(CHOP, fc, StateMode.PREPEND)

        assert generated.output == {"chopped peeled carrot"}
        assert successor.state == "chopped peeled"


class TestCookingActionSpec:
    """Action definitions as data"""

    def test_own_name_always_disabled(self):
        action = CookingActionSpec(name="peel", state_word="peeled", direction_template="peel the {root}")

        assert "peel" in action.disables

    def test_unknown_placeholder_rejected(self):
        with pytest.raises(ValidationError):
            CookingActionSpec(name="peel", state_word="peeled", direction_template="peel the {food}")

    def test_declared_action_replaces_builtin(self):
        """KB files may redefine a built-in action by name"""
        slow_chop = CookingActionSpec(name="chop", state_word="diced", direction_template="dice the {root}")

        merged = merge_actions([slow_chop])

        assert [a.name for a in merged] == ["chop", "boil", "fry"]
        assert merged[0].state_word == "diced"


class TestProduceContent:
    """The content production fixpoint"""

    def test_empty_input_gives_empty_kb(self):
        kb = produce_content([], [], [], [])

        assert kb.skills == ()
        assert kb.can_make == frozenset()

    def test_raw_potato_expansion(self):
        """Every reachable process appears exactly once"""
        kb = produce_content([potato()], list(BUILTIN_ACTIONS))

        assert [p.id for p in kb.skills] == [
            "chop:raw potato",
            "boil:raw potato",
            "fry:raw potato",
            "boil:chopped potato",
            "fry:chopped potato",
            "chop:boiled potato",
            "fry:boiled potato",
            "chop:fried potato",
        ]

    def test_raw_potato_matches_exhaustive_expansion(self):
        """The worklist finds the same processes as trying every action sequence"""
        kb = produce_content([potato()], list(BUILTIN_ACTIONS))

        by_hand = expand_by_hand(potato(), BUILTIN_ACTIONS)

        assert {p.id: p for p in kb.skills} == by_hand

    def test_application_count_is_bounded(self):
        """No seed class yields more than 2^actions applications"""
        kb = produce_content([potato()], list(BUILTIN_ACTIONS))

        assert len(kb.skills) <= 2 ** len(BUILTIN_ACTIONS)

    def test_synonym_becomes_ghost(self):
        """Synonyms produce zero-time processes with an empty direction"""
        chips = Synonym(name="chips", definition={"fried sliced potato"})

        kb = produce_content([], [], [chips], [])

        (ghost,) = kb.skills
        assert ghost.is_ghost
        assert ghost.id == "synonym:1"
        assert ghost.input == {"fried sliced potato"}
        assert ghost.output == {"chips"}
        assert (ghost.time, ghost.f_time, ghost.direction) == (0, 0, "")

    def test_synonym_cannot_define_itself(self):
        with pytest.raises(ValidationError):
            Synonym(name="chips", definition={"chips", "fried potato"})

    def test_closure_over_all_skill_strings(self):
        """Extra inputs such as boiling water are recognised strings too"""
        kb = produce_content([potato()], list(BUILTIN_ACTIONS))

        for p in kb.skills:
            assert p.input | p.output <= kb.can_make
        assert "boiling water" in kb.can_make

    def test_self_disabling(self):
        """A class produced by an action can no longer undergo it"""
        for fc in (potato(), FoodClass(root="carrot", state="raw", indicators={"chop": 120, "boil": 480})):
            for action in BUILTIN_ACTIONS:
                if fc.indicators.get(action.name):
                    _, successor = apply_action(action, fc)
                    assert successor.indicators[action.name] is False

    def test_deterministic(self):
        first = produce_content([potato()], list(BUILTIN_ACTIONS))
        second = produce_content([potato()], list(BUILTIN_ACTIONS))

        assert first.skills == second.skills

    def test_custom_processes_are_appended(self, dahl_kb):
        """Generated processes come first, then ghosts, then custom processes in file order"""
        assert [p.id for p in dahl_kb.skills] == [
            "chop:raw carrot",
            "chop:raw broccoli",
            "synonym:1",
            "custom:1",
            "custom:2",
            "custom:3",
            "custom:4",
            "custom:5",
        ]
        assert len(dahl_kb.can_make) == 13

    def test_unknown_action_rejected(self):
        fc = FoodClass(root="carrot", state="raw", indicators={"julienne": 60})

        with pytest.raises(UnknownAction, match="julienne"):
            produce_content([fc], list(BUILTIN_ACTIONS))

    def test_duplicate_custom_id_rejected(self):
        custom = Process(id="custom:1", input={"a"}, output={"b"}, time=10, direction="mix")

        with pytest.raises(DuplicateProcessId):
            produce_content([], [], [], [custom, custom])

    def test_custom_process_invariants_enforced(self):
        """Free time above total time is rejected"""
        with pytest.raises(ValidationError):
            Process(id="custom:1", input={"a"}, output={"b"}, time=10, f_time=20)
