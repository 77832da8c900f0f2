/**
 * Four figure builders, each mapping loaded harness data to an echarts
 * option object.  Builders are pure so tests can assert on the option tree
 * without rendering.
 *
 * - convergence: per-round |error| and posterior spread for one run
 * - robustness: error trajectories from a family of starting priors
 * - landscape: single-step information heatmap with the argmax marked
 * - comparison: structured vs finite-difference arms, shared error axis
 */

import type { EChartsOption } from "echarts/types/dist/shared";
import {
  CompareData,
  LandscapeData,
  RunData,
  SweepData,
} from "./load.js";
import { unitSuffix } from "./schemas.js";

const PALETTE = ["#3366cc", "#dc3912", "#ff9900", "#109618", "#990099",
  "#0099c6", "#dd4477"];

function base(title: string, subtitle: string): EChartsOption {
  return {
    animation: false,
    color: [...PALETTE],
    title: { text: title, subtext: subtitle, left: "center" },
    grid: { left: 70, right: 80, top: 80, bottom: 60 },
  };
}

export function convergenceFigure(run: RunData): EChartsOption {
  const ks = run.rows.map((r) => r.k as number);
  const series: NonNullable<EChartsOption["series"]> = [];
  for (const p of run.params) {
    series.push({
      name: `|error| ${p}${unitSuffix(p)}`,
      type: "line",
      data: run.rows.map((r) => [r.k, r[`abs_err_${p}`]]) as number[][],
      symbolSize: 6,
    });
    series.push({
      name: `posterior std ${p}${unitSuffix(p)}`,
      type: "line",
      lineStyle: { type: "dashed" },
      data: run.rows.map((r) => [r.k, r[`sigma_${p}`]]) as number[][],
      symbolSize: 4,
    });
  }
  const sc = run.config.scenario;
  return {
    ...base(
      `Convergence: ${sc.name}`,
      `engine ${run.config.engine.mode}, seed ${run.config.seed}`,
    ),
    legend: { bottom: 0 },
    xAxis: {
      type: "value",
      name: "round",
      nameLocation: "middle",
      nameGap: 28,
      minInterval: 1,
      max: Math.max(...ks),
    },
    yAxis: {
      type: "log",
      name: "parameter error / spread",
      nameLocation: "middle",
      nameGap: 50,
    },
    series,
  };
}

export function robustnessFigure(sweep: SweepData): EChartsOption {
  const byPrior = new Map<number, { k: number; err: number }[]>();
  for (const r of sweep.rows) {
    const i = r.prior_index as number;
    if (!byPrior.has(i)) byPrior.set(i, []);
    const errs = sweep.params.map((p) => r[`abs_err_${p}`] as number);
    byPrior.get(i)!.push({
      k: r.k as number,
      err: errs.reduce((a, b) => a + b, 0) / errs.length,
    });
  }
  const label = (i: number) => {
    const row = sweep.rows.find((r) => r.prior_index === i)!;
    const mode = sweep.params
      .map((p) => (row[`prior_${p}`] as number).toPrecision(3))
      .join(", ");
    return `prior ${mode}`;
  };
  const series = [...byPrior.keys()].sort((a, b) => a - b).map((i) => ({
    name: label(i),
    type: "line" as const,
    data: byPrior.get(i)!.map((pt) => [pt.k, pt.err]),
    symbolSize: 5,
  }));
  const unit = sweep.params.length === 1 ? unitSuffix(sweep.params[0]) : "";
  return {
    ...base(
      `Robustness to the starting prior: ${sweep.summary.scenario}`,
      `${sweep.summary.priors.length} priors, ${sweep.summary.k_max} rounds`,
    ),
    legend: { bottom: 0 },
    xAxis: {
      type: "value",
      name: "round",
      nameLocation: "middle",
      nameGap: 28,
      minInterval: 1,
    },
    yAxis: {
      type: "log",
      name: `mean |error|${unit}`,
      nameLocation: "middle",
      nameGap: 50,
    },
    series,
  };
}

export function landscapeFigure(
  land: LandscapeData,
  source: string,
): EChartsOption {
  const a1Vals = [...new Set(land.rows.map((r) => r.a1))].sort((x, y) => x - y);
  const a2Vals = [...new Set(land.rows.map((r) => r.a2))].sort((x, y) => x - y);
  const cells = land.rows.map((r) => [
    a2Vals.indexOf(r.a2),
    a1Vals.indexOf(r.a1),
    r.value,
  ]);
  let best = land.rows[0];
  for (const r of land.rows) if (r.value > best.value) best = r;
  const fmt = (v: number) => v.toPrecision(3);
  return {
    ...base(
      "Single-step information landscape",
      `${source}; peak ${best.value.toPrecision(4)} at ` +
        `${land.axes[0]}=${fmt(best.a1)}, ${land.axes[1]}=${fmt(best.a2)}`,
    ),
    xAxis: {
      type: "category",
      data: a2Vals.map(fmt),
      name: `${land.axes[1]} (m/s)`,
      nameLocation: "middle",
      nameGap: 28,
    },
    yAxis: {
      type: "category",
      data: a1Vals.map(fmt),
      name: `${land.axes[0]} (m/s)`,
      nameLocation: "middle",
      nameGap: 50,
    },
    visualMap: {
      min: 0,
      max: best.value,
      calculable: false,
      orient: "vertical",
      right: 10,
      top: "center",
      text: ["trace F", "0"],
      inRange: { color: ["#10122b", "#3366cc", "#ffcc33", "#ffffe0"] },
    },
    series: [
      { name: "trace F", type: "heatmap", data: cells },
      {
        name: "argmax",
        type: "scatter",
        data: [[a2Vals.indexOf(best.a2), a1Vals.indexOf(best.a1)]],
        symbol: "diamond",
        symbolSize: 14,
        itemStyle: { color: "#ffffff", borderColor: "#dc3912", borderWidth: 2 },
        z: 10,
      },
    ],
  };
}

export function comparisonFigure(cmp: CompareData): EChartsOption {
  const series: NonNullable<EChartsOption["series"]> = [];
  for (const [pi, p] of cmp.params.entries()) {
    const u = unitSuffix(p);
    series.push({
      name: `structured |err| ${p}${u}`,
      type: "line",
      yAxisIndex: 0,
      data: cmp.rows.map((r) => [r.k, r[`med_abs_err_${p}_ca`]]) as number[][],
      color: PALETTE[pi % PALETTE.length],
      symbolSize: 6,
    });
    series.push({
      name: `finite-diff |err| ${p}${u}`,
      type: "line",
      yAxisIndex: 0,
      lineStyle: { type: "dashed" },
      data: cmp.rows.map((r) =>
        [r.k, r[`med_abs_err_${p}_baseline`]]) as number[][],
      color: PALETTE[pi % PALETTE.length],
      symbolSize: 4,
    });
  }
  series.push({
    name: "structured cum. info",
    type: "line",
    yAxisIndex: 1,
    data: cmp.rows.map((r) => [r.k, r.med_cum_trace_ca]) as number[][],
    color: "#888888",
    symbolSize: 6,
  });
  series.push({
    name: "finite-diff cum. info",
    type: "line",
    yAxisIndex: 1,
    lineStyle: { type: "dashed" },
    data: cmp.rows.map((r) => [r.k, r.med_cum_trace_baseline]) as number[][],
    color: "#bbbbbb",
    symbolSize: 4,
  });
  const rep = cmp.report;
  return {
    ...base(
      `Planner comparison: ${rep.scenario}`,
      `${rep.n_seeds} paired seeds; sign test p=${rep.sign_test_p.toPrecision(3)}`,
    ),
    legend: { bottom: 0 },
    xAxis: {
      type: "value",
      name: "round",
      nameLocation: "middle",
      nameGap: 28,
      minInterval: 1,
    },
    // both arms' error curves share yAxis 0 so their ordering is readable
    yAxis: [
      {
        type: "log",
        name: "median |error|",
        nameLocation: "middle",
        nameGap: 50,
      },
      {
        type: "value",
        name: "median cumulative trace F",
        nameLocation: "middle",
        nameGap: 60,
        splitLine: { show: false },
      },
    ],
    series,
  };
}
