"""
Reporting Module
Builds analysis, rank and scan reports and renders them as JSON or text

The text form is always rendered from the report dictionary.
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd

from src.design import DesignAnalysis
from src.exactnum import decode_value, encode_value
from src.jacobi import GeometryParams, Polynomial, r_at_one
from src.rankforms import RankProfile, ScanResult
from src.scheme import SchemeAnalysis

logger = logging.getLogger(__name__)

BANNER = "=" * 80


def _geometry(geom: GeometryParams) -> Dict:
    return {'rank': geom.rho, 'degree': geom.degree, 'label': geom.label}


def _coefficients(poly: Polynomial) -> List:
    return [encode_value(c) for c in poly.coefficients]


def _text_value(value, radicand: Optional[int] = None) -> str:
    return str(decode_value(value, radicand))


def _text_polynomial(coefficients: List, radicand: Optional[int] = None) -> str:
    """Descending-degree form of an encoded coefficient list"""
    return str(Polynomial(decode_value(c, radicand) for c in coefficients))


def _exception_table(cells: List[Dict]) -> pd.DataFrame:
    """Exception counts per geometry"""
    df = pd.DataFrame(cells, columns=["rho", "degree", "s", "eps", "exception"])
    df = df[df["exception"].astype(bool)]
    if df.empty:
        return df
    return (
        df.groupby(["rho", "degree"], sort=True)
        .agg(cells=("s", "size"), min_s=("s", "min"), max_s=("s", "max"))
        .reset_index()
    )


class AnalysisReporter:
    """Assemble reports with a fixed key order and write them out"""

    def __init__(self, config: Optional[Dict] = None):
        self.config = config or {}
        self.indent = self.config.get('output', {}).get('indent', 2)

    # Report assembly

    def analysis_report(self, analysis: DesignAnalysis, scheme: Optional[SchemeAnalysis] = None) -> Dict:
        design, profile, tightness = analysis.design, analysis.profile, analysis.tightness
        report = {
            'report': 'analysis',
            'name': design.name,
            'geometry': _geometry(design.geom),
            'radicand': design.radicand,
            'cardinality': design.size,
            'source': design.source.value,
            'angles': [
                {'value': encode_value(a), 'pairs': count}
                for a, count in zip(profile.angles, profile.pair_counts)
            ],
            's': profile.s,
            'eps': profile.eps,
            'strength': profile.strength,
            'observed_rational': profile.all_rational,
            'tight': tightness.tight,
            'strength_matches': tightness.strength_matches,
            'cardinality_matches': tightness.cardinality_matches,
            'expected_strength': tightness.expected_strength,
            'expected_cardinality': encode_value(tightness.expected_cardinality),
            'annihilator': _coefficients(tightness.annihilator.ann),
            'target': _coefficients(tightness.annihilator.target),
            'indicator': [encode_value(c) for c in tightness.annihilator.indicator],
            'scheme': self.scheme_section(scheme) if scheme is not None else None,
        }
        return report

    def scheme_section(self, scheme: SchemeAnalysis) -> Dict:
        dec, basis, verdict = scheme.decomposition, scheme.basis, scheme.verdict
        return {
            'classes': [
                {'angle': encode_value(a), 'edges': edges}
                for a, edges in zip(dec.angles, dec.edge_counts())
            ],
            'closed': scheme.closed,
            'construction': basis.construction.value,
            'idempotents_verified': True,
            'dense_verified': scheme.dense_verified,
            'naive_top_idempotent': basis.naive_top_is_idempotent(),
            'ranks': [
                {
                    'index': t.index,
                    'closed_form': encode_value(t.closed_form),
                    'trace': encode_value(t.trace),
                    'elimination': t.elimination,
                }
                for t in scheme.rank_triples
            ],
            'rank_sum': sum(t.elimination for t in scheme.rank_triples),
            'verdict': {
                'ranks_distinct': verdict.ranks_distinct,
                'collision_pairs': [list(p) for p in verdict.collision_pairs],
                'certified_rational': verdict.certified_rational,
                'observed_rational': verdict.observed_rational,
                'consistent': verdict.consistent,
                'l1_isolated': verdict.l1_isolated,
            },
        }

    def ranks_report(self, profile: RankProfile) -> Dict:
        return {
            'report': 'ranks',
            'geometry': _geometry(profile.geom),
            's': profile.s,
            'eps': profile.eps,
            'ranks': [encode_value(r) for r in profile.ranks],
            'collisions': [list(p) for p in profile.collisions],
            'integral': profile.integral,
            'cardinality': encode_value(r_at_one(profile.s, profile.eps, profile.geom)),
        }

    def scan_report(self, result: ScanResult, degrees: List[int], include_octonion_plane: bool) -> Dict:
        rho_max = max((g.rho for g in result.geometries), default=0)
        cells = [
            {
                'rho': c.rho,
                'degree': c.degree,
                's': c.s,
                'eps': c.eps,
                'top_rank': encode_value(c.top_rank),
                'integral': c.integral,
                'collisions': [list(p) for p in c.collisions],
                'exception': c.is_exception,
            }
            for c in result.cells
        ]
        summary = {
            'geometries': len(result.geometries),
            'cells': len(result.cells),
            'cells_with_collisions': sum(1 for c in result.cells if c.collisions),
            'non_integral_top_ranks': sum(1 for c in result.cells if not c.integral),
            'exceptions_found': [list(k) for k in result.exceptions_found],
            'expected_exceptions': len(result.expected_exceptions),
            'matches_theorem': result.matches_theorem,
            'top_rank_monotone': all(result.monotone.values()),
        }
        return {
            'report': 'scan',
            'parameters': {
                'degrees': sorted(degrees),
                'max_rank': rho_max,
                'max_s': result.s_max,
                'include_octonion_plane': include_octonion_plane,
            },
            'cells': cells,
            'summary': summary,
        }

    # Rendering

    def to_json(self, report: Dict) -> str:
        return json.dumps(report, indent=self.indent, ensure_ascii=False) + "\n"

    def render_text(self, report: Dict) -> str:
        kind = report['report']
        if kind == 'analysis':
            return self._analysis_text(report)
        if kind == 'ranks':
            return self._ranks_text(report)
        return self._scan_text(report)

    def render(self, report: Dict, fmt: str) -> str:
        return self.to_json(report) if fmt == 'json' else self.render_text(report)

    def write(self, report: Dict, fmt: str, output: Optional[str] = None) -> str:
        """Render and send to the output file, or return the text for stdout"""
        text = self.render(report, fmt)
        if output:
            path = Path(output)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding='utf-8')
            logger.info(f"Report saved to: {path}")
        return text

    @staticmethod
    def _analysis_text(r: Dict) -> str:
        geom, m = r['geometry'], r['radicand']
        lines = [
            BANNER,
            f"DESIGN ANALYSIS: {r['name'] or 'unnamed design'}",
            BANNER,
            f"Geometry:        rank {geom['rank']}, degree {geom['degree']} ({geom['label']})",
            f"Radicand:        {r['radicand'] if r['radicand'] is not None else '-'}",
            f"Points:          {r['cardinality']} (from {r['source']})",
            f"Angles:          s={r['s']}, eps={r['eps']}",
            "",
        ]
        angles = pd.DataFrame(
            {
                'angle': [_text_value(a['value'], m) for a in r['angles']],
                'pairs': [a['pairs'] for a in r['angles']],
            }
        )
        lines += [angles.to_string(index=False), ""]
        lines += [
            f"Strength t:      {r['strength']} (tight value {r['expected_strength']}, matches {r['strength_matches']})",
            f"Tight:           {r['tight']} (tight size {_text_value(r['expected_cardinality'])}, matches {r['cardinality_matches']})",
            f"Rational angles: {r['observed_rational']}",
            f"Annihilator:     {_text_polynomial(r['annihilator'], m)}",
            f"Tight target:    {_text_polynomial(r['target'], m)}",
            f"Indicator:       {', '.join(_text_value(c, m) for c in r['indicator'])}",
        ]
        scheme = r['scheme']
        if scheme is not None:
            lines += ["", BANNER, "ASSOCIATION SCHEME", BANNER]
            lines.append(f"Closed under products: {scheme['closed']}")
            lines.append(f"Construction:          {scheme['construction']}")
            lines.append(f"Dense check:           {scheme['dense_verified']}")
            lines.append(f"Naive E_s idempotent:  {scheme['naive_top_idempotent']}")
            ranks = pd.DataFrame(
                {
                    'L': [t['index'] for t in scheme['ranks']],
                    'closed form': [_text_value(t['closed_form']) for t in scheme['ranks']],
                    'trace': [_text_value(t['trace'], m) for t in scheme['ranks']],
                    'elimination': [t['elimination'] for t in scheme['ranks']],
                }
            )
            lines += ["", ranks.to_string(index=False), f"Sum of ranks: {scheme['rank_sum']}", ""]
            v = scheme['verdict']
            lines += [
                "Verdict:",
                f"  Ranks distinct:     {v['ranks_distinct']}  collisions {v['collision_pairs']}",
                f"  Certified rational: {v['certified_rational']}",
                f"  Observed rational:  {v['observed_rational']}",
                f"  L_1 isolated:       {v['l1_isolated']}",
                f"  Consistent:         {v['consistent']}",
            ]
        lines.append(BANNER)
        return "\n".join(lines) + "\n"

    @staticmethod
    def _ranks_text(r: Dict) -> str:
        geom = r['geometry']
        return "\n".join(
            [
                BANNER,
                f"CLOSED-FORM RANKS: {geom['label']} (rank {geom['rank']}, degree {geom['degree']}), "
                f"s={r['s']}, eps={r['eps']}",
                BANNER,
                f"Ranks:       {', '.join(r['ranks'])}",
                f"Collisions:  {r['collisions']}",
                f"Integral:    {r['integral']}",
                f"Tight size:  {r['cardinality']}",
                BANNER,
            ]
        ) + "\n"

    @staticmethod
    def _scan_text(r: Dict) -> str:
        p, s = r['parameters'], r['summary']
        lines = [
            BANNER,
            f"RANK COLLISION SCAN: degrees {p['degrees']}, rank <= {p['max_rank']}, s <= {p['max_s']}",
            BANNER,
            f"Geometries scanned:     {s['geometries']}",
            f"Cells scanned:          {s['cells']}",
            f"Cells with collisions:  {s['cells_with_collisions']}",
            f"Non-integral top ranks: {s['non_integral_top_ranks']}",
            f"Exceptions found:       {len(s['exceptions_found'])} (expected {s['expected_exceptions']})",
            f"Matches theorem:        {s['matches_theorem']}",
            f"Top ranks monotone:     {s['top_rank_monotone']}",
            "",
        ]
        table = _exception_table(r['cells'])
        if not table.empty:
            lines += ["Exceptions by geometry:", table.to_string(index=False)]
        lines.append(BANNER)
        return "\n".join(lines) + "\n"
