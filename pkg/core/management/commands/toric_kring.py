import logging
from pathlib import Path
from typing import Any, Optional

from django.core.management.base import BaseCommand, CommandError, CommandParser

from core.exceptions import (
    BasisError,
    DocumentError,
    KRingError,
    MembershipError,
    NotInSpanError,
)
from core.fan.cellular import CellularCertificate, RejectionReport, certify_cellular
from core.fan.fan import (
    Fan,
    disconnected_stars,
    is_complete,
    is_pure,
    stars_strongly_connected,
    validate,
)
from core.kring.basis import (
    KBasis,
    basis_from_classes,
    construct_basis,
    coordinates,
    structure_constants,
)
from core.kring.gkm import GKMGraph, KClass, build_gkm, kclass
from core.kring.plp import from_kclass, validate_plp
from core.serializers import (
    FanDocument,
    parse_basis_document,
    parse_class_document,
    parse_fan_document,
    read_document,
    render_document,
    result_document,
)
from core.util.lattice import LatticeVector

logger = logging.getLogger(__name__)

ACTIONS = ("validate", "complete", "cellular", "gkm", "plp", "basis", "coords", "structconst")

EXIT_USAGE = 1
EXIT_INVALID_FAN = 2
EXIT_NOT_CELLULAR = 3
EXIT_NOT_MEMBER = 4


class Outcome(Exception):
    """A finished result document together with its exit code."""

    def __init__(self, kind: str, payload: Any, code: int = 0):
        self.kind = kind
        self.payload = payload
        self.code = code
        super().__init__(kind)


class Command(BaseCommand):
    help = (
        "Certify cellularity of a fan with respect to a generic vector and compute "
        "its equivariant K-ring (GKM tuples, piecewise Laurent polynomials, basis)."
    )

    def create_parser(self, prog_name: str, subcommand: str, **kwargs) -> CommandParser:
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        # Raise CommandError (exit 1) on bad arguments instead of argparse's exit 2
        parser.called_from_command_line = False
        return parser

    def run_from_argv(self, argv):
        try:
            super().run_from_argv(argv)
        except CommandError as e:
            self.stderr.write(f"CommandError: {e}")
            raise SystemExit(e.returncode)

    def add_arguments(self, parser: CommandParser):
        parser.add_argument("action", choices=ACTIONS)
        parser.add_argument("--fan", required=True, help="Fan document path or fixture name")
        parser.add_argument("--v", help="Generic vector as comma separated integers")
        parser.add_argument(
            "--class", dest="class_doc", help="Class document path or fixture name"
        )
        parser.add_argument("--basis", help="Basis document used by coords")
        parser.add_argument("--out", help="Write the result document here instead of stdout")

    def handle(self, *args, **options):
        action = options["action"]
        logger.info("Running %s on %s", action, options["fan"])
        try:
            document = parse_fan_document(read_document(options["fan"]))
            outcome = getattr(self, f"run_{action}")(document, options)
        except Outcome as early:
            outcome = early
        except DocumentError as e:
            raise CommandError(str(e), returncode=EXIT_USAGE)
        self.emit(outcome, options.get("out"))
        logger.info("Finished %s with %s", action, outcome.kind)
        if outcome.code:
            raise CommandError(f"{action} finished with {outcome.kind}", returncode=outcome.code)

    def emit(self, outcome: Outcome, out: Optional[str]):
        text = render_document(result_document(outcome.kind, outcome.payload))
        if out:
            Path(out).write_text(text, encoding="utf-8")
        else:
            self.stdout.write(text, ending="")

    # Pipeline stages raise an Outcome when they end the run early

    def valid_fan(self, document: FanDocument) -> Fan:
        fan = document.to_fan()
        violations = validate(fan)
        if violations:
            raise Outcome(
                "validation", {"valid": False, "violations": violations}, EXIT_INVALID_FAN
            )
        return fan

    def vector(self, document: FanDocument, options: dict) -> LatticeVector:
        raw = options.get("v")
        if raw is None:
            if document.v is None:
                raise CommandError(
                    "--v is required when the fan has no v", returncode=EXIT_USAGE
                )
            return document.v
        try:
            v = tuple(int(x) for x in raw.split(","))
        except ValueError:
            raise CommandError(f"Cannot parse --v {raw!r}", returncode=EXIT_USAGE) from None
        if len(v) != document.rank:
            raise CommandError(
                f"--v has {len(v)} entries, the fan has rank {document.rank}",
                returncode=EXIT_USAGE,
            )
        return v

    def certificate(self, fan: Fan, v: LatticeVector) -> CellularCertificate:
        result = certify_cellular(fan, v)
        if isinstance(result, RejectionReport):
            raise Outcome("rejection", result.context(), EXIT_NOT_CELLULAR)
        return result

    def complete_data(
        self, document: FanDocument, options: dict
    ) -> tuple[Fan, GKMGraph, CellularCertificate]:
        fan = self.valid_fan(document)
        cert = self.certificate(fan, self.vector(document, options))
        if not is_complete(fan):
            report = RejectionReport("not complete")
            raise Outcome("rejection", report.context(), EXIT_NOT_CELLULAR)
        return fan, build_gkm(fan, cert), cert

    def member(self, g: GKMGraph, components: list, field: str) -> KClass:
        try:
            return kclass(g, components)
        except MembershipError as e:
            payload = {
                "reason": "not a member",
                "document": field,
                "violated_edges": [[i + 1, j + 1] for i, j in e.violations],
            }
            raise Outcome("rejection", payload, EXIT_NOT_MEMBER)
        except KRingError as e:
            raise DocumentError(str(e), field=field)

    def class_argument(self, g: GKMGraph, options: dict) -> KClass:
        if not options.get("class_doc"):
            raise CommandError("--class is required", returncode=EXIT_USAGE)
        rank, components = parse_class_document(read_document(options["class_doc"]))
        if rank != g.rank or len(components) != g.m:
            raise DocumentError(
                f"expected {g.m} components of rank {g.rank}", field="components"
            )
        return self.member(g, components, "class")

    def basis_argument(self, g: GKMGraph, cert: CellularCertificate, options: dict) -> KBasis:
        if not options.get("basis"):
            return construct_basis(g, cert)
        rank, classes = parse_basis_document(read_document(options["basis"]))
        if rank != g.rank or len(classes) != g.m:
            raise DocumentError(f"expected {g.m} classes of rank {g.rank}", field="classes")
        members = [self.member(g, c, f"basis class {k + 1}") for k, c in enumerate(classes)]
        try:
            return basis_from_classes(g, cert, members)
        except BasisError as e:
            raise Outcome(
                "rejection", {"reason": "not a basis", "problems": str(e)}, EXIT_NOT_MEMBER
            )

    # Actions

    def run_validate(self, document: FanDocument, options: dict) -> Outcome:
        self.valid_fan(document)
        return Outcome("validation", {"valid": True, "violations": []})

    def run_complete(self, document: FanDocument, options: dict) -> Outcome:
        fan = self.valid_fan(document)
        complete = is_complete(fan)
        payload = {
            "is_complete": complete,
            "is_pure": is_pure(fan),
            "stars_strongly_connected": stars_strongly_connected(fan),
            "disconnected_stars": [tau.context() for tau in disconnected_stars(fan)],
        }
        return Outcome("completeness", payload, 0 if complete else EXIT_NOT_CELLULAR)

    def run_cellular(self, document: FanDocument, options: dict) -> Outcome:
        fan = document.to_fan()
        result = certify_cellular(fan, self.vector(document, options))
        if isinstance(result, RejectionReport):
            code = EXIT_INVALID_FAN if result.reason == "invalid fan" else EXIT_NOT_CELLULAR
            return Outcome("rejection", result.context(), code)
        return Outcome("cellular-certificate", result.context())

    def run_gkm(self, document: FanDocument, options: dict) -> Outcome:
        _, g, _ = self.complete_data(document, options)
        return Outcome("gkm-graph", g.context())

    def run_plp(self, document: FanDocument, options: dict) -> Outcome:
        fan, g, _ = self.complete_data(document, options)
        p = from_kclass(g, fan, self.class_argument(g, options))
        check = validate_plp(fan, p)
        return Outcome("plp", {"valid": check.ok, "pieces": p.context()})

    def run_basis(self, document: FanDocument, options: dict) -> Outcome:
        _, g, cert = self.complete_data(document, options)
        return Outcome("basis", construct_basis(g, cert).context())

    def run_coords(self, document: FanDocument, options: dict) -> Outcome:
        _, g, cert = self.complete_data(document, options)
        basis = self.basis_argument(g, cert, options)
        a = self.class_argument(g, options)
        try:
            coeffs = coordinates(g, cert, basis, a)
        except NotInSpanError as e:
            return Outcome("rejection", {"reason": str(e)}, EXIT_NOT_MEMBER)
        payload = {
            "basis": "supplied" if options.get("basis") else "constructed",
            "coordinates": [
                {"cone": i + 1, "terms": c.context()} for i, c in enumerate(coeffs)
            ],
        }
        return Outcome("coordinates", payload)

    def run_structconst(self, document: FanDocument, options: dict) -> Outcome:
        _, g, cert = self.complete_data(document, options)
        constants = structure_constants(g, cert, construct_basis(g, cert))
        payload = {"m": constants.m, "constants": constants.context()}
        return Outcome("structure-constants", payload)
