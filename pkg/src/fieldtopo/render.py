"""Render a run report to CSV tables and SVG Gauss-image plots.

Rendering is pure string generation: `render_report` returns a mapping of
file name to content, so the service can ship files over the wire and the
CLI can write them to disk.
"""

from __future__ import annotations

import csv
import io

_SIZE = 420
_CENTER = _SIZE / 2
_RADIUS = 160.0


def _svg_header() -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SIZE}" height="{_SIZE}" '
        f'viewBox="0 0 {_SIZE} {_SIZE}">',
        f'<rect width="{_SIZE}" height="{_SIZE}" fill="white"/>',
    ]


def _to_px(x: float, y: float) -> tuple[float, float]:
    return (_CENTER + _RADIUS * x, _CENTER - _RADIUS * y)


def _polyline(points, color: str, close: bool = False) -> str:
    coords = " ".join(f"{px:.2f},{py:.2f}" for px, py in points)
    tag = "polygon" if close else "polyline"
    return f'<{tag} points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>'


def _unit_circle() -> str:
    return (
        f'<circle cx="{_CENTER}" cy="{_CENTER}" r="{_RADIUS}" fill="none" '
        'stroke="#999" stroke-dasharray="4 3"/>'
    )


def _gauss_curve_svg(values: list[float], annotation: str) -> str:
    pts = [_to_px(values[i], values[i + 1]) for i in range(0, len(values) - 1, 2)]
    lines = _svg_header()
    lines.append(_unit_circle())
    if pts:
        lines.append(_polyline(pts + pts[:1], "#1f6feb"))
    lines.append(
        f'<text x="12" y="{_SIZE - 14}" font-family="monospace" font-size="13">'
        f"{annotation}</text>"
    )
    lines.append("</svg>")
    return "\n".join(lines)


def _gauss_projections_svg(values: list[float], annotation: str) -> str:
    pts3 = [
        (values[i], values[i + 1], values[i + 2]) for i in range(0, len(values) - 2, 3)
    ]
    width = 3 * _SIZE
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{_SIZE}" '
        f'viewBox="0 0 {width} {_SIZE}">',
        f'<rect width="{width}" height="{_SIZE}" fill="white"/>',
    ]
    planes = [("x1-x2", 0, 1), ("x1-x3", 0, 2), ("x2-x3", 1, 2)]
    for panel, (label, a, b) in enumerate(planes):
        dx = panel * _SIZE
        lines.append(
            f'<circle cx="{dx + _CENTER}" cy="{_CENTER}" r="{_RADIUS}" fill="none" '
            'stroke="#999" stroke-dasharray="4 3"/>'
        )
        pts = [(dx + _CENTER + _RADIUS * p[a], _CENTER - _RADIUS * p[b]) for p in pts3]
        if pts:
            lines.append(_polyline(pts, "#1f6feb"))
        lines.append(
            f'<text x="{dx + 12}" y="24" font-family="monospace" font-size="13">{label}</text>'
        )
    lines.append(
        f'<text x="12" y="{_SIZE - 14}" font-family="monospace" font-size="13">'
        f"{annotation}</text>"
    )
    lines.append("</svg>")
    return "\n".join(lines)


def _hemisphere_svg(report: dict) -> str:
    lines = _svg_header()
    lines.append(_unit_circle())
    gauss = next(
        (e for e in report["evidence"] if e["label"] == "gauss_image"), None
    )
    if gauss:
        pts = [
            _to_px(gauss["values"][i], gauss["values"][i + 1])
            for i in range(0, len(gauss["values"]) - 1, 2)
        ]
        lines.append(_polyline(pts + pts[:1], "#1f6feb"))
    for e in report["evidence"]:
        if e["label"] != "normal" or len(e["values"]) != 4:
            continue
        ax, ay, crossings, _ = e["values"]
        px, py = _to_px(1.08 * ax, 1.08 * ay)
        color = "#2da44e" if crossings >= 1 else "#cf222e"
        lines.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="3" fill="{color}"/>')
        tx, ty = _to_px(1.2 * ax, 1.2 * ay)
        lines.append(
            f'<text x="{tx:.2f}" y="{ty:.2f}" font-family="monospace" '
            f'font-size="9" text-anchor="middle">{int(crossings)}</text>'
        )
    lines.append(
        f'<text x="12" y="{_SIZE - 14}" font-family="monospace" font-size="13">'
        f'hemisphere crossings per normal ({report["verdict"]})</text>'
    )
    lines.append("</svg>")
    return "\n".join(lines)


def _checks_csv(report: dict) -> str:
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(
        ["check", "verdict", "expected", "observed", "seed", "runtime_ms"]
    )
    for rep in report["reports"]:
        writer.writerow(
            [
                rep["condition"],
                rep["verdict"],
                rep["expected"],
                rep["observed"],
                rep["seed"],
                f"{rep['runtime_ms']:.1f}",
            ]
        )
    return out.getvalue()


def _evidence_csv(report: dict) -> str:
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(["check", "label", "values"])
    for rep in report["reports"]:
        for e in rep["evidence"]:
            if e["label"] in ("gauss_image", "gauss_image3d"):
                continue  # geometry goes to the SVG files
            writer.writerow(
                [rep["condition"], e["label"], " ".join(f"{v:.10g}" for v in e["values"])]
            )
    return out.getvalue()


def render_report(report, fmt: str = "csv") -> dict[str, str]:
    """Files (name -> content) for a RunReport or its dict form."""
    if hasattr(report, "to_dict"):
        report = report.to_dict()
    name = report["scenario"]
    files: dict[str, str] = {}
    if fmt == "csv":
        files[f"{name}_checks.csv"] = _checks_csv(report)
        files[f"{name}_evidence.csv"] = _evidence_csv(report)
        return files
    if fmt != "svg":
        raise ValueError(f"unsupported render format {fmt!r}")
    for idx, rep in enumerate(report["reports"]):
        stem = f"{name}_{idx}_{rep['condition']}"
        if rep["condition"] == "hemisphere":
            files[f"{stem}.svg"] = _hemisphere_svg(rep)
            continue
        for e in rep["evidence"]:
            if e["label"] == "gauss_image":
                note = f"{rep['condition']}: winding {rep['observed']}"
                files[f"{stem}.svg"] = _gauss_curve_svg(e["values"], note)
            elif e["label"] == "gauss_image3d":
                note = f"{rep['condition']}: class {rep['observed']}"
                files[f"{stem}.svg"] = _gauss_projections_svg(e["values"], note)
    return files
