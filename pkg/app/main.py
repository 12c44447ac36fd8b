#!/usr/bin/env python
"""
Recipe planner command line.

Usage examples:
  python -m app.main produce --kb kb/vegetable_dahl.json --out build/dahl.db.json
  python -m app.main plan "vegetable dahl" --db build/dahl.db.json --supplies kb/dahl_supplies.txt
  python -m app.main orders "vegetable dahl" --db build/dahl.db.json --supplies kb/dahl_supplies.txt
  python -m app.main verify "vegetable dahl" --db build/dahl.db.json --supplies kb/dahl_supplies.txt
  python -m app.main verify-random --count 50 --size 5 --seed 7

Exit codes: 0 success, 1 input or limit error, 2 insufficient ingredients,
3 optimizer and exhaustive search disagree.
"""
import argparse
import logging
import random
import sys
from pathlib import Path
from typing import List, Optional

from app.core.config import LookAhead, settings
from app.core.exceptions import PlannerError
from app.models.schemas import InsufficientIngredients
from app.services.oracle import compare, random_instance
from app.services.planner import RecipePlanner
from app.services.realization import TextRenderer
from app.services.storage import compile_knowledge_base, load_database, load_supplies, save_database, save_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INSUFFICIENT = 2
EXIT_DISAGREE = 3


def _insufficient(result: InsufficientIngredients) -> int:
    print(result.message)
    return EXIT_INSUFFICIENT


def _planner(args) -> RecipePlanner:
    return RecipePlanner(
        load_database(args.db),
        limit=args.limit,
        lookahead=args.lookahead,
        seed=getattr(args, "seed", None),
    )


def cmd_produce(args) -> int:
    kb = compile_knowledge_base(args.kb)
    save_database(kb, args.out)
    print(f"can_make: {len(kb.can_make)}")
    print(f"skills: {len(kb.skills)}")
    return EXIT_OK


def cmd_plan(args) -> int:
    result = _planner(args).plan(args.dish, load_supplies(args.supplies), use_gerund=args.gerund)
    if isinstance(result, InsufficientIngredients):
        return _insufficient(result)

    text = TextRenderer().render_recipe(result.recipe)
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_orders(args) -> int:
    result = _planner(args).orders(args.dish, load_supplies(args.supplies))
    if isinstance(result, InsufficientIngredients):
        return _insufficient(result)

    print(f"orders: {result.count}")
    if result.count:
        print(f"min: {result.minimum}")
        print(f"max: {result.maximum}")
        print("makespans: " + " ".join(str(m) for m in result.makespans))
    return EXIT_OK


def cmd_verify(args) -> int:
    report = _planner(args).verify(args.dish, load_supplies(args.supplies))
    if isinstance(report, InsufficientIngredients):
        return _insufficient(report)

    text = TextRenderer().render_report(report)
    sys.stdout.write(text)
    if report.agrees:
        return EXIT_OK
    path = save_report(report, text, args.artifacts)
    logger.warning(f"Disagreement persisted to {path}")
    return EXIT_DISAGREE


def cmd_verify_random(args) -> int:
    rng = random.Random(args.seed)
    renderer = TextRenderer()
    disagreements = 0
    for index in range(args.count):
        processes, graph = random_instance(rng, args.size, args.edge_probability)
        report = compare(f"random-{args.seed}-{index}", processes, graph, lookahead=args.lookahead)
        if not report.agrees:
            disagreements += 1
            save_report(report, renderer.render_report(report), args.artifacts)

    print(f"instances: {args.count}")
    print(f"agree: {args.count - disagreements}")
    print(f"disagree: {disagreements}")
    return EXIT_OK if disagreements == 0 else EXIT_DISAGREE


def _query_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("dish", help="Dish to plan, e.g. 'vegetable dahl'")
    parser.add_argument("--db", required=True, help="Compiled database written by 'produce'")
    parser.add_argument("--supplies", required=True, help="Supplies file, one ingredient per line")
    parser.add_argument("--limit", type=int, default=None, help="Maximum number of permissible orders")
    parser.add_argument("--lookahead", type=LookAhead, choices=list(LookAhead), default=None,
                        help="Insertions a host gives up for its own future insertion")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="recipe-planner", description="Plan time-efficient recipes")
    parser.add_argument("--version", action="version", version=f"{settings.PROJECT_NAME} {settings.VERSION}")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log pipeline stages to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    produce = sub.add_parser("produce", help="Compile a knowledge base into a process database")
    produce.add_argument("--kb", required=True, help="Knowledge base JSON file")
    produce.add_argument("--out", required=True, help="Where to write the database")
    produce.set_defaults(handler=cmd_produce)

    plan = sub.add_parser("plan", help="Print the fastest recipe for a dish")
    _query_arguments(plan)
    plan.add_argument("--gerund", action="store_true", help="Write 'while boiling' instead of 'while boil'")
    plan.add_argument("--seed", type=int, default=None, help="Choose among alternative producers at random")
    plan.add_argument("--out", default=None, help="Write the recipe to a file instead of stdout")
    plan.set_defaults(handler=cmd_plan)

    orders = sub.add_parser("orders", help="Count permissible orders and their compressed times")
    _query_arguments(orders)
    orders.set_defaults(handler=cmd_orders)

    verify = sub.add_parser("verify", help="Check the optimizer against exhaustive search")
    _query_arguments(verify)
    verify.add_argument("--artifacts", default=None, help="Directory for disagreement reports")
    verify.set_defaults(handler=cmd_verify)

    batch = sub.add_parser("verify-random", help="Check the optimizer on seeded random instances")
    batch.add_argument("--count", type=int, default=50)
    batch.add_argument("--size", type=int, default=5)
    batch.add_argument("--seed", type=int, default=0)
    batch.add_argument("--edge-probability", type=float, default=0.3)
    batch.add_argument("--lookahead", type=LookAhead, choices=list(LookAhead), default=None)
    batch.add_argument("--artifacts", default=None, help="Directory for disagreement reports")
    batch.set_defaults(handler=cmd_verify_random)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else settings.LOG_LEVEL,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.handler(args)
    except PlannerError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
