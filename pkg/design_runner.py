"""
Design Runner for the tight-design rationality toolkit
Main entry point: analyze, scheme, ranks, scan and catalog subcommands

Exit codes: 0 success, 1 input error, 2 internal invariant failure.
"""

import argparse
import logging
import sys
from pathlib import Path

# Add src to path
sys.path.append(str(Path(__file__).parent))

from src import catalog
from src.config_loader import ConfigLoader
from src.design import analyze_design
from src.design_loader import DesignLoader
from src.exceptions import InputError, InvariantViolation
from src.jacobi import GeometryParams
from src.rankforms import rank_profile, scan_collisions
from src.reporter import AnalysisReporter
from src.scheme import analyze_scheme

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = str(Path(__file__).parent / 'config' / 'analysis_config.yaml')


def setup_logging(config):
    """Configure root logging once; stderr keeps stdout free for the report"""
    level = getattr(logging, str(config['logging'].get('level', 'INFO')).upper(), logging.INFO)
    fmt = config['logging'].get('format', '%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    handlers = [logging.StreamHandler(sys.stderr)]
    log_file = config['logging'].get('file')
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file, encoding='utf-8'))
    logging.basicConfig(level=level, format=fmt, handlers=handlers, force=True)


def run_analyze(args, config):
    """Validation, angle set, strength and tightness of a design file"""
    design = DesignLoader(config).load(args.file)
    analysis = analyze_design(design)
    return AnalysisReporter(config).analysis_report(analysis)


def run_scheme(args, config):
    """Full pipeline including idempotents, rank triples and the verdict"""
    design = DesignLoader(config).load(args.file)
    analysis = analyze_design(design)
    scheme = analyze_scheme(analysis, config['scheme'].get('dense_check_max_points', 32))
    return AnalysisReporter(config).analysis_report(analysis, scheme)


def run_ranks(args, config):
    geom = GeometryParams(args.rank, args.degree)
    profile = rank_profile(geom, args.s, args.eps)
    return AnalysisReporter(config).ranks_report(profile)


def run_scan(args, config):
    degrees = config['scan']['degrees']
    include_octonion = config['scan'].get('include_octonion_plane', True)
    result = scan_collisions(
        degrees,
        config['scan']['max_rank'],
        config['scan']['max_s'],
        include_octonion_plane=include_octonion,
    )
    return AnalysisReporter(config).scan_report(result, degrees, include_octonion)


def run_catalog(args, config):
    """Emit a design file; always JSON in the design-file layout"""
    entry = catalog.by_name(args.name)
    loader = DesignLoader(config)
    if args.output:
        loader.save(entry.design, args.output)
        return None
    return loader.dumps(entry.design)


def _degrees(text):
    try:
        return [int(d) for d in text.split(',') if d.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected comma-separated integers, got {text!r}")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=['json', 'text'], default=None,
                        help='Report format (default from config: text)')
    common.add_argument('-o', '--output', type=str, default=None,
                        help='Write the report to FILE instead of stdout')
    common.add_argument('--config', type=str, default=DEFAULT_CONFIG,
                        help='Path to configuration file')

    parser = argparse.ArgumentParser(
        description='Exact analysis of tight designs on spheres and projective spaces'
    )
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('analyze', parents=[common], help='Strength and tightness of a design file')
    p.add_argument('file', type=str)
    p.set_defaults(handler=run_analyze)

    p = sub.add_parser('scheme', parents=[common], help='Idempotents, ranks and rationality verdict')
    p.add_argument('file', type=str)
    p.set_defaults(handler=run_scheme)

    p = sub.add_parser('ranks', parents=[common], help='Closed-form ranks for given parameters')
    p.add_argument('--rank', type=int, required=True)
    p.add_argument('--degree', type=int, required=True)
    p.add_argument('--s', type=int, required=True)
    p.add_argument('--eps', type=int, choices=[0, 1], required=True)
    p.set_defaults(handler=run_ranks)

    p = sub.add_parser('scan', parents=[common], help='Rank collision scan over admissible geometries')
    p.add_argument('--degrees', type=_degrees, default=None)
    p.add_argument('--max-rank', type=int, default=None)
    p.add_argument('--max-s', type=int, default=None)
    p.add_argument('--no-octonion-plane', action='store_true',
                   help='Leave (rank, degree) = (3, 8) out of the scan')
    p.set_defaults(handler=run_scan)

    p = sub.add_parser('catalog', parents=[common], help='Write a known tight design as a design file')
    p.add_argument('name', type=str, help=', '.join(catalog.CATALOG_NAMES))
    p.set_defaults(handler=run_catalog)

    return parser


def _apply_overrides(args, config_loader):
    if args.format:
        config_loader.update('output.format', args.format)
    if args.command == 'scan':
        if args.degrees is not None:
            config_loader.update('scan.degrees', args.degrees)
        if args.max_rank is not None:
            config_loader.update('scan.max_rank', args.max_rank)
        if args.max_s is not None:
            config_loader.update('scan.max_s', args.max_s)
        if args.no_octonion_plane:
            config_loader.update('scan.include_octonion_plane', False)


def main(argv=None):
    """Main entry point"""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        config_loader = ConfigLoader(args.config)
        config = config_loader.load()
    except (FileNotFoundError, ValueError) as e:
        print(f"✗ Configuration error: {e}", file=sys.stderr)
        return 1
    _apply_overrides(args, config_loader)
    setup_logging(config)

    try:
        result = args.handler(args, config)
    except (InputError, FileNotFoundError) as e:
        print(f"✗ {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except InvariantViolation as e:
        print(f"✗ Internal check failed ({type(e).__name__}): {e}", file=sys.stderr)
        logger.exception("Invariant violation")
        return 2

    if result is None:
        return 0
    if isinstance(result, str):
        sys.stdout.write(result)
        return 0

    reporter = AnalysisReporter(config)
    text = reporter.write(result, config['output'].get('format', 'text'), args.output)
    if not args.output:
        sys.stdout.write(text)
    return 0


if __name__ == '__main__':
    sys.exit(main())
