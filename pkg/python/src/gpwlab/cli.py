"""
Command line interface, ``gpwlab <command> --config <path>``.

Every command writes a JSON summary ``<command>.json`` and a CSV table
``<command>.csv`` in the output directory. The exit code is 0 on success, 2
for invalid input and 3 for mathematical domain errors.
"""
import argparse
import logging
import os
import sys
from typing import Dict, List, Optional, Tuple

from . import io
from .config import COMMANDS, ExperimentConfig, load_config
from .divergence import von_neumann_quantities
from .exponents import asymptotic_exponents, optimize_alpha, single_shot_bounds
from .families import BinaryWiretapFamily
from .hyptest import lemma5_check
from .rates import RateAllocation, allocate_rates, lemma_LA_equivalence, rate_point
from .simulation import (
    BOUND_ALPHAS,
    codebook_batch,
    conditional_resolvability_experiment,
    resolvability_experiment,
    secrecy_batch,
)
from .status import GpwlabError, SchemaError
from .version import __version__


LOGGER = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

THREADS_ENV = "GPWLAB_THREADS"

DEFAULT_ALPHA = (0.5,)

Output = Tuple[Dict, List[Dict]]


def _evaluation_state(config: ExperimentConfig):
    return io.load_setup(config.input).evaluation_state()


def _allocation(config: ExperimentConfig, state) -> RateAllocation:
    if config.rates is not None:
        return RateAllocation(*config.rates.as_tuple())
    return allocate_rates(von_neumann_quantities(state), *config.margins)


def _require_rates(config: ExperimentConfig) -> Tuple[int, int, int]:
    if config.rates is None:
        raise SchemaError(f"the {config.command} command requires 'rates'")
    return config.rates.as_integers()


def cmd_rate(config: ExperimentConfig, threads: int) -> Output:
    """achievable rates of the input setup"""
    point = rate_point(_evaluation_state(config))
    rows = [{"quantity": k, "value": v} for k, v in point.table.as_dict().items()]
    for i, value in enumerate(point.components, start=1):
        rows.append({"quantity": f"component{i}", "value": value})
    rows.append({"quantity": "rate_a", "value": point.rate_a})
    rows.append({"quantity": "rate_alt", "value": point.rate_alt})
    return point.as_dict(), rows


def cmd_exponent(config: ExperimentConfig, threads: int) -> Output:
    """finite blocklength bounds and exponents, one record per α"""
    state = _evaluation_state(config)
    allocation = _allocation(config, state)

    records = []
    rows = []
    for alpha in config.alphas(DEFAULT_ALPHA):
        report = single_shot_bounds(
            state, allocation, alpha, n=config.n, cluster_tol=config.cluster_tol
        )
        exponents = asymptotic_exponents(
            state, allocation, alpha, cluster_tol=config.cluster_tol
        )
        records.append({"bounds": report.as_dict(), "exponents": exponents.as_dict()})

        row = {"alpha": alpha}
        row.update(report.terms)
        row["error_bound"] = report.error_bound
        row["secrecy_bound"] = report.secrecy_bound
        row["expurgated_error_bound"] = report.expurgated_error_bound
        row["expurgated_secrecy_bound"] = report.expurgated_secrecy_bound
        row["error_exponent"] = exponents.error
        row["secrecy_exponent"] = exponents.secrecy
        rows.append(row)

    result = {"rates": allocation.as_dict(), "records": records}
    if config.optimize:
        result["optimal"] = {}
        for objective in ("error", "secrecy", "min"):
            alpha, value = optimize_alpha(
                state, allocation, objective, cluster_tol=config.cluster_tol
            )
            result["optimal"][objective] = {"alpha": alpha, "exponent": value}
    return result, rows


def cmd_hyptest(config: ExperimentConfig, threads: int) -> Output:
    """error probabilities of the decoder tests and their bounds"""
    state = _evaluation_state(config)
    M1, M2 = config.M1, config.M2
    if M1 is None or M2 is None:
        if config.rates is None:
            raise SchemaError("the hyptest command requires 'M1' and 'M2' or 'rates'")
        R, R1, r = config.rates.as_tuple()
        M1 = 2.0 ** (R + R1 + r) if M1 is None else M1
        M2 = 2.0 ** (R + R1) if M2 is None else M2

    report = lemma5_check(
        state, M1, M2, config.alphas(DEFAULT_ALPHA), cluster_tol=config.cluster_tol
    )
    result = {
        "M1": M1,
        "M2": M2,
        "v2": report.v2,
        "traces": list(report.traces),
        "alphas": list(report.alphas),
        "bounds": [list(bounds) for bounds in report.bounds],
        "all_hold": report.all_hold(),
    }
    return result, report.as_rows()


def cmd_resolve(config: ExperimentConfig, threads: int) -> Output:
    """channel resolvability experiment on the channel state or the eavesdropper"""
    state = _evaluation_state(config)
    _, R1, r = _require_rates(config)
    alpha = config.alphas(DEFAULT_ALPHA)[0]
    if config.mode == "joint":
        result = resolvability_experiment(
            state, r, R1, alpha, config.trials, config.seed, threads
        )
    else:
        result = conditional_resolvability_experiment(
            state, R1, alpha, config.trials, config.seed, threads
        )
    return result.as_dict(), result.rows


def cmd_decode(config: ExperimentConfig, threads: int) -> Output:
    """decoding error of sampled codebooks, with the expurgation check"""
    batch = codebook_batch(
        io.load_setup(config.input),
        _require_rates(config),
        config.trials,
        config.seed,
        threads,
        alphas=config.alphas(BOUND_ALPHAS),
        beta=config.beta,
    )
    result = batch.decode.as_dict()
    result["expurgation"] = batch.expurgation.as_dict()
    result["secrecy"] = batch.secrecy.as_dict()
    return result, batch.decode.rows


def cmd_secrecy(config: ExperimentConfig, threads: int) -> Output:
    """leakage of sampled codebooks"""
    result = secrecy_batch(
        io.load_setup(config.input),
        _require_rates(config),
        config.trials,
        config.seed,
        threads,
        alphas=config.alphas(BOUND_ALPHAS),
    )
    return result.as_dict(), result.rows


def cmd_lemma_la(config: ExperimentConfig, threads: int) -> Output:
    """compare the maxima of the two rate expressions over a binary family"""
    family_config = config.family
    family = BinaryWiretapFamily(
        family_config.q_b,
        family_config.q_e,
        p_v=family_config.p_v,
        c=family_config.c,
        step=family_config.step,
    )
    report = lemma_LA_equivalence(family, threads=threads)
    rows = []
    for (p_v, c), point in report.points:
        rows.append(
            {
                "p_v": p_v,
                "c": c,
                "rate_a": point.rate_a,
                "rate_alt": point.rate_alt,
                "s2_member": point.s2_member,
            }
        )
    return report.as_dict(), rows


COMMAND_FUNCTIONS = {
    "rate": cmd_rate,
    "exponent": cmd_exponent,
    "hyptest": cmd_hyptest,
    "resolve": cmd_resolve,
    "decode": cmd_decode,
    "secrecy": cmd_secrecy,
    "lemma-la": cmd_lemma_la,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gpwlab",
        description="numerical experiments on Gel'fand-Pinsker wiretap codes",
    )
    parser.add_argument("--version", action="version", version=f"gpwlab {__version__}")

    subparsers = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        function = COMMAND_FUNCTIONS[name]
        command = subparsers.add_parser(name, help=function.__doc__)
        command.add_argument(
            "--config", required=True, help="path to the JSON configuration file"
        )
        command.add_argument("--seed", type=int, help="override the configured seed")
        command.add_argument(
            "--threads",
            type=int,
            help=f"number of worker threads, defaults to ${THREADS_ENV} or 1",
        )
        command.add_argument(
            "--out", default=".", help="directory where results are written"
        )
        command.add_argument(
            "-v",
            "--verbose",
            action="count",
            default=0,
            help="print progress information, repeat for debug output",
        )
    return parser


def _threads(args, config: ExperimentConfig) -> int:
    if args.threads is not None:
        threads = args.threads
    elif config.threads is not None:
        threads = config.threads
    else:
        try:
            threads = int(os.environ.get(THREADS_ENV, "1"))
        except ValueError:
            raise SchemaError(f"${THREADS_ENV} should be an integer") from None

    if threads < 1:
        raise SchemaError(f"the number of threads must be positive, got {threads}")
    return threads


def run(args) -> Tuple[str, str]:
    """
    Run the command described by the parsed ``args`` and write its outputs.

    :return: paths of the JSON summary and of the CSV table
    """
    config = load_config(args.config, args.command)
    if args.seed is not None:
        config = config.replace(seed=args.seed)
    threads = _threads(args, config)

    LOGGER.info("running %s with %d thread(s)", args.command, threads)
    result, rows = COMMAND_FUNCTIONS[args.command](config, threads)

    os.makedirs(args.out, exist_ok=True)
    json_path = os.path.join(args.out, f"{args.command}.json")
    csv_path = os.path.join(args.out, f"{args.command}.csv")
    io.write_json(json_path, args.command, result)
    io.write_csv(csv_path, rows)
    return json_path, csv_path


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    level = logging.WARNING
    if args.verbose == 1:
        level = logging.INFO
    elif args.verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT)

    try:
        json_path, csv_path = run(args)
    except GpwlabError as e:
        print(f"gpwlab {args.command}: error: {e.message}", file=sys.stderr)
        return e.status

    LOGGER.info("results written to %s and %s", json_path, csv_path)
    return 0
