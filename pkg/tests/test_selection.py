import random

import pytest

from app.core.exceptions import CyclicKnowledgeBase, EmptyDish
from app.models.schemas import InsufficientIngredients, KnowledgeBase, SelectedContent
from app.services.selection import makeable, select_content
from tests.conftest import DAHL_SUPPLIES, process


def kb_of(*processes) -> KnowledgeBase:
    strings = frozenset().union(*(p.input | p.output for p in processes)) if processes else frozenset()
    return KnowledgeBase(can_make=strings, skills=processes)


class TestSelectContent:
    """Backward chaining from a dish to ingredients and processes"""

    def test_dahl_selection_trace(self, dahl_content):
        """Ingredients and processes come out in first-in first-out order"""
        assert isinstance(dahl_content, SelectedContent)
        assert dahl_content.ingred_list == ("coconut milk", "lentils", "water", "raw broccoli", "raw carrot")
        assert [p.name for p in dahl_content.action_list] == [
            "mix_dahl",
            "strain_lentils",
            "fry_vegetables",
            "boil_lentils",
            "ghost_chopped_vegetables",
            "bring_to_boil",
            "chop_broccoli",
            "chop_carrot",
        ]

    def test_dahl_selection_includes_ghost(self, dahl_content):
        ghosts = [p for p in dahl_content.action_list if p.is_ghost]

        assert len(ghosts) == 1
        assert ghosts[0].output == {"chopped vegetables"}

    def test_selection_is_sound(self, dahl_content):
        """Firing the selected processes from the ingredients reaches the dish"""
        reached, _ = makeable(dahl_content, "vegetable dahl")

        assert reached

    def test_ingredients_come_from_supplies(self, dahl_content):
        assert set(dahl_content.ingred_list) <= set(DAHL_SUPPLIES)

    def test_dish_in_supplies(self, dahl_kb):
        """A supplied dish needs no processes"""
        content = select_content("lentils", DAHL_SUPPLIES, dahl_kb)

        assert content.ingred_list == ("lentils",)
        assert content.action_list == ()

    def test_missing_lentils(self, dahl_kb):
        """Strings nobody produces are reported once the search is exhausted"""
        supplies = [s for s in DAHL_SUPPLIES if s != "lentils"]

        result = select_content("vegetable dahl", supplies, dahl_kb)

        assert isinstance(result, InsufficientIngredients)
        assert result.needed == ("lentils",)
        assert result.message.startswith("Insufficient ingredients, you need:")

    def test_unknown_dish_is_needed(self, dahl_kb):
        result = select_content("beef wellington", DAHL_SUPPLIES, dahl_kb)

        assert result.needed == ("beef wellington",)

    def test_needed_is_sorted(self, dahl_kb):
        result = select_content("vegetable dahl", ["coconut milk"], dahl_kb)

        assert list(result.needed) == sorted(result.needed)
        assert {"lentils", "water", "raw carrot", "raw broccoli"} <= set(result.needed)

    def test_dish_is_normalized(self, dahl_kb, dahl_content):
        """User input matches knowledge-base strings regardless of case and spacing"""
        assert select_content("  Vegetable   Dahl ", DAHL_SUPPLIES, dahl_kb) == dahl_content

    def test_empty_dish_rejected(self, dahl_kb):
        with pytest.raises(EmptyDish):
            select_content("   ", DAHL_SUPPLIES, dahl_kb)

    def test_cyclic_knowledge_base(self):
        """A string needed to make itself aborts the search"""
        kb = kb_of(process("make_a", {"b"}, {"a"}), process("make_b", {"a"}, {"b"}))

        with pytest.raises(CyclicKnowledgeBase, match="a <- b <- a"):
            select_content("a", [], kb)

    def test_diamond_is_not_a_cycle(self):
        """Two branches needing the same string share it"""
        kb = kb_of(
            process("make_d", {"x", "y"}, {"d"}),
            process("make_x", {"z"}, {"x"}),
            process("make_y", {"z"}, {"y"}),
        )

        content = select_content("d", ["z"], kb)

        assert [p.id for p in content.action_list] == ["make_d", "make_x", "make_y"]
        assert content.ingred_list == ("z",)

    def test_first_producer_wins(self):
        kb = kb_of(process("first", {"a"}, {"d"}), process("second", {"b"}, {"d"}))

        content = select_content("d", ["a", "b"], kb)

        assert [p.id for p in content.action_list] == ["first"]

    def test_seeded_random_producer(self):
        """A seed makes the random producer choice reproducible"""
        kb = kb_of(*(process(f"way{i}", {f"raw{i}"}, {"d"}) for i in range(5)))
        supplies = [f"raw{i}" for i in range(5)]

        picks = {select_content("d", supplies, kb, rng=random.Random(seed)).action_list[0].id for seed in range(40)}
        again = select_content("d", supplies, kb, rng=random.Random(3))

        assert len(picks) > 1
        assert again == select_content("d", supplies, kb, rng=random.Random(3))

    def test_supplies_are_not_consumed(self):
        """One supplied string can feed two processes"""
        kb = kb_of(
            process("make_d", {"x", "y"}, {"d"}),
            process("make_x", {"salt"}, {"x"}),
            process("make_y", {"salt"}, {"y"}),
        )

        content = select_content("d", ["salt"], kb)

        assert content.ingred_list == ("salt",)
        assert len(content.action_list) == 3
