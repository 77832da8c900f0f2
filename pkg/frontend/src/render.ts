/** Server-side SVG rendering.  No DOM: echarts runs in SSR mode and the
 * option builders disable animation, so the same input yields the same
 * SVG string every time. */

import { init, use } from "echarts/core";
import type { EChartsOption } from "echarts/types/dist/shared";
import { HeatmapChart, LineChart, ScatterChart } from "echarts/charts";
import {
  GridComponent,
  LegendComponent,
  TitleComponent,
  VisualMapComponent,
} from "echarts/components";
import { SVGRenderer } from "echarts/renderers";

use([
  LineChart,
  HeatmapChart,
  ScatterChart,
  GridComponent,
  TitleComponent,
  LegendComponent,
  VisualMapComponent,
  SVGRenderer,
]);

export interface RenderSize {
  width: number;
  height: number;
}

export const DEFAULT_SIZE: RenderSize = { width: 860, height: 560 };

/* echarts mints CSS class, clip-path, and gradient ids from process-wide
 * counters, so the raw SVG bytes depend on how many charts were rendered
 * before this one.  Renumber each id family by first appearance; the
 * mapping is 1:1 so styles stay correct and identical inputs give
 * identical files. */
function canonicalizeIds(svg: string): string {
  const seen: Record<string, Map<string, number>> = {};
  return svg.replace(/\bzr\d+-(cls-|c|g)(\d+)\b/g, (token, kind: string) => {
    const ids = (seen[kind] ??= new Map<string, number>());
    if (!ids.has(token)) ids.set(token, ids.size);
    return `zr-${kind}${ids.get(token)}`;
  });
}

export function renderSvg(
  option: EChartsOption,
  size: RenderSize = DEFAULT_SIZE,
): string {
  const chart = init(null, null, {
    renderer: "svg",
    ssr: true,
    width: size.width,
    height: size.height,
  });
  try {
    chart.setOption(option);
    return canonicalizeIds(chart.renderToSVGString());
  } finally {
    chart.dispose();
  }
}
