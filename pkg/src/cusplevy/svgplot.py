"""Self-contained SVG plots (no plotting dependency).

Line charts with axes and ticks; step series are rendered as staircases.
Output is deterministic text.
"""

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
           "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _ticks(lo: float, hi: float, n: int = 5):
    if hi <= lo:
        hi = lo + 1.0
    span = hi - lo
    return [lo + span * i / (n - 1) for i in range(n)]


def svg_line_plot(series, title="", xlabel="", ylabel="", width=720, height=440,
                  step=False) -> str:
    """series: iterable of (xs, ys, label).  Returns SVG text."""
    series = [(list(map(float, xs)), list(map(float, ys)), str(label))
              for xs, ys, label in series]
    pts = [(x, y) for xs, ys, _ in series for x, y in zip(xs, ys)]
    if not pts:
        pts = [(0.0, 0.0), (1.0, 1.0)]
    xlo = min(p[0] for p in pts)
    xhi = max(p[0] for p in pts)
    ylo = min(p[1] for p in pts)
    yhi = max(p[1] for p in pts)
    if xhi == xlo:
        xhi = xlo + 1.0
    if yhi == ylo:
        yhi = ylo + 1.0
    pad = 0.05 * (yhi - ylo)
    ylo -= pad
    yhi += pad
    ml, mr, mt, mb = 64, 16, 28, 44

    def sx(x):
        return ml + (x - xlo) / (xhi - xlo) * (width - ml - mr)

    def sy(y):
        return height - mb - (y - ylo) / (yhi - ylo) * (height - mt - mb)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="monospace" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width/2:.1f}" y="16" text-anchor="middle" font-size="13">{title}</text>',
    ]
    for t in _ticks(xlo, xhi):
        px = sx(t)
        out.append(f'<line x1="{px:.2f}" y1="{height-mb}" x2="{px:.2f}" y2="{height-mb+5}" stroke="black"/>')
        out.append(f'<text x="{px:.2f}" y="{height-mb+18}" text-anchor="middle">{_fmt(t)}</text>')
    for t in _ticks(ylo, yhi):
        py = sy(t)
        out.append(f'<line x1="{ml-5}" y1="{py:.2f}" x2="{ml}" y2="{py:.2f}" stroke="black"/>')
        out.append(f'<text x="{ml-8}" y="{py+4:.2f}" text-anchor="end">{_fmt(t)}</text>')
    out.append(f'<rect x="{ml}" y="{mt}" width="{width-ml-mr}" height="{height-mt-mb}" '
               f'fill="none" stroke="black"/>')
    out.append(f'<text x="{width/2:.1f}" y="{height-8}" text-anchor="middle">{xlabel}</text>')
    out.append(f'<text x="14" y="{height/2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 14 {height/2:.1f})">{ylabel}</text>')
    for k, (xs, ys, label) in enumerate(series):
        color = _COLORS[k % len(_COLORS)]
        cmds = []
        for i, (x, y) in enumerate(zip(xs, ys)):
            if i == 0:
                cmds.append(f"M{sx(x):.2f},{sy(y):.2f}")
            elif step:
                cmds.append(f"L{sx(x):.2f},{sy(ys[i-1]):.2f}")
                cmds.append(f"L{sx(x):.2f},{sy(y):.2f}")
            else:
                cmds.append(f"L{sx(x):.2f},{sy(y):.2f}")
        out.append(f'<path d="{" ".join(cmds)}" fill="none" stroke="{color}" stroke-width="1.2"/>')
        if label:
            ly = mt + 14 + 14 * k
            out.append(f'<line x1="{width-mr-110}" y1="{ly-4}" x2="{width-mr-90}" y2="{ly-4}" '
                       f'stroke="{color}" stroke-width="2"/>')
            out.append(f'<text x="{width-mr-86}" y="{ly}">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def svg_step_paths(paths, labels=None, title="", width=720, height=440) -> str:
    """Ensemble of cadlag step paths rendered as staircases."""
    series = []
    for k, p in enumerate(paths):
        xs = [p.a]
        ys = [float(p.values[0])]
        for t, v in zip(p.times, p.values[1:]):
            xs.append(float(t))
            ys.append(float(v))
        xs.append(p.b)
        ys.append(float(p.values[-1]))
        label = labels[k] if labels else ""
        series.append((xs, ys, label))
    return svg_line_plot(series, title=title, xlabel="t", ylabel="W_n(t)", width=width,
                         height=height, step=True)


def svg_table_outline(geom, n_wall: int = 400, n_arc: int = 200, title="") -> str:
    """Outline of the billiard table (cusp walls plus closing arc)."""
    import numpy as np

    ss = np.linspace(0.0, geom.s_max, n_wall)
    upper = (ss, ss**geom.beta / geom.beta, "upper wall")
    lower = (ss, -(ss**geom.beta) / geom.beta, "lower wall")
    aa = np.linspace(-geom.arc_half_angle, geom.arc_half_angle, n_arc)
    arc = (geom.arc_center_x - geom.arc_radius * np.cos(aa), -geom.arc_radius * np.sin(aa), "closing arc")
    series = [(xs.tolist(), ys.tolist(), label) for xs, ys, label in (upper, lower, arc)]
    return svg_line_plot(series, title=title or "billiard table", xlabel="x", ylabel="y",
                         width=640, height=480)
