import argparse
import dataclasses
import logging
import os
import sys
from typing import Callable, Dict, List, Optional, Tuple

from synthdg import forms
from synthdg import scalar_algebra as sa
from synthdg.dev_config import ScalarKind, SuiteConfig, load_config
from synthdg.document import Document, builtin_document, load_document
from synthdg.errors import SynthDGError
from synthdg.oracle import classical_exterior_derivative
from synthdg.prolongation import WPoint, prolong
from synthdg.report import EXIT_INPUT_ERROR, EXIT_OK, Report, law, render
from synthdg.suite import oracle_check, run_suite

LOGLEVEL = os.environ.get("LOGLEVEL", "WARNING").upper()
logging.basicConfig(level=LOGLEVEL)

logger = logging.getLogger(__name__)

Command = Callable[[argparse.Namespace, SuiteConfig, Document], int]


def _common_arguments() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="YAML or JSON document, defaults to the built-in one")
    common.add_argument("--seed", help="Seed for every random choice", type=int)
    common.add_argument("--samples", help="Random cases per law", type=int)
    common.add_argument("--json", help="Print the machine readable report", action="store_true")
    common.add_argument("--config", help="Path to the config file")
    common.add_argument(
        "--scalar",
        help="Scalars used by prolong eval",
        type=str,
        choices=["rational", "float"],
    )
    common.add_argument(
        "--verbose", help="List passing entries as well", action="store_true"
    )
    return common


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    common = _common_arguments()
    parser = argparse.ArgumentParser(prog="synthdg")
    groups = parser.add_subparsers(dest="group", required=True)

    algebra = groups.add_parser("algebra").add_subparsers(dest="action", required=True)
    show = algebra.add_parser("show", parents=[common], help="Print the basis of an algebra")
    show.add_argument("name")

    hom = groups.add_parser("hom").add_subparsers(dest="action", required=True)
    check = hom.add_parser("check", parents=[common], help="Validate a homomorphism")
    check.add_argument("name")

    prolongation = groups.add_parser("prolong").add_subparsers(dest="action", required=True)
    evaluate = prolongation.add_parser("eval", parents=[common], help="Prolong a smooth map at a point")
    evaluate.add_argument("name")
    evaluate.add_argument("--algebra", help="Algebra of the point", required=True)
    evaluate.add_argument(
        "--point",
        help="Comma separated coordinates written in the generators, such as '1 + X, 2'",
        required=True,
    )

    form = groups.add_parser("form").add_subparsers(dest="action", required=True)
    validate = form.add_parser("validate", parents=[common], help="Validate a classical field as a form")
    validate.add_argument("name")
    derivative = form.add_parser("d", parents=[common], help="Exterior derivative of a classical field")
    derivative.add_argument("name")

    everything = groups.add_parser("check").add_subparsers(dest="action", required=True)
    everything.add_parser("all", parents=[common], help="Run the full law suite")

    return parser.parse_args(argv)


def cmd_algebra(args: argparse.Namespace, config: SuiteConfig, document: Document) -> int:
    algebra = document.algebra(args.name)
    if not algebra.is_weil:
        free = ", ".join(algebra.non_nilpotent_generators)
        print(f"{algebra} is not a Weil algebra, free generators: {free}")
        return EXIT_OK
    basis = sa.weil_basis(algebra)
    rendered = ", ".join(m.render(algebra.generators) for m in basis)
    print(f"dim {len(basis)}: {rendered}")
    return EXIT_OK


def cmd_hom(args: argparse.Namespace, config: SuiteConfig, document: Document) -> int:
    report = Report(f"hom check {args.name}", config.seed)
    path = f"homs.{args.name}"
    try:
        hom = document.hom(args.name)
        report.extend([law(f"document.{path}", "document", str(hom), True)])
    except SynthDGError as e:
        if not any(r.path == path for r in document.rejected):
            raise
        report.extend([r for r in document.validation_results() if r.id == f"document.{path}"])
        logger.debug("hom %s rejected: %s", args.name, e)
    print(render(report, args.json, verbose=True))
    return report.exit_code


def cmd_prolong(args: argparse.Namespace, config: SuiteConfig, document: Document) -> int:
    f = document.smooth_map(args.name)
    algebra = document.algebra(args.algebra)
    components = [sa.normal_form(algebra, text) for text in args.point.split(",")]
    if config.scalar is ScalarKind.FLOAT:
        components = [
            sa.AlgElement.from_terms(algebra, ((m, float(c)) for m, c in element.terms))
            for element in components
        ]
    p = WPoint.from_components(algebra, components)
    print(prolong(f, algebra, p))
    return EXIT_OK


def cmd_form_validate(args: argparse.Namespace, config: SuiteConfig, document: Document) -> int:
    field = document.classical_field(args.name)
    omega = forms.from_classical(field, check=False)
    report = forms.validate_form(omega, config.samples, config.seed)
    print(render(report, args.json, args.verbose))
    return report.exit_code


def cmd_form_d(args: argparse.Namespace, config: SuiteConfig, document: Document) -> int:
    field = document.classical_field(args.name)
    omega = forms.from_classical(field, check=False)
    report = Report(f"form d {args.name}", config.seed)
    report.extend(oracle_check(field, omega, config.samples, config.seed))
    if not args.json:
        classical = dataclasses.replace(classical_exterior_derivative(field), name="")
        print(f"d({field}) = {classical}")
    print(render(report, args.json, args.verbose))
    return report.exit_code


def cmd_check_all(args: argparse.Namespace, config: SuiteConfig, document: Document) -> int:
    progress = not args.json and sys.stderr.isatty()
    report = run_suite(config, document, progress)
    print(render(report, args.json, args.verbose))
    return report.exit_code


COMMANDS: Dict[Tuple[str, str], Command] = {
    ("algebra", "show"): cmd_algebra,
    ("hom", "check"): cmd_hom,
    ("prolong", "eval"): cmd_prolong,
    ("form", "validate"): cmd_form_validate,
    ("form", "d"): cmd_form_d,
    ("check", "all"): cmd_check_all,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = parse_args(argv)
    try:
        scalar = ScalarKind.from_string(args.scalar) if args.scalar else None
        config = load_config(args.config, scalar).with_overrides(args.seed, args.samples)
        document = load_document(args.input) if args.input else builtin_document()
        command = COMMANDS[(args.group, args.action)]
        return command(args, config, document)
    except (SynthDGError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
