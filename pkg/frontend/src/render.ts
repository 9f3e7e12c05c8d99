// Pure HTML renderers for the chat log and the report screen. Keeping these
// as string builders (no document access) lets them run in node tests.

import { ChatMessage } from "./state.js";
import { FeedbackReport, MetricVerdict } from "./api.js";

// Published scoring bands, mirrored here for the value-vs-threshold bars.
export const BANDS = {
    awkwardMax: 10,
    questionRatioMin: 0.39,
    wpmLow: 120,
    wpmHigh: 150,
    lsmMin: 0.8,
};

const METRIC_LABELS: Record<string, string> = {
    awkward: "Awkward transitions",
    questions: "Questions asked",
    pace: "Speaking pace",
    tics: "Overused words",
    acknowledgment: "Attention to partner",
};

export const METRIC_ORDER = ["awkward", "questions", "pace", "tics", "acknowledgment"] as const;

export function escapeHtml(text: string): string {
    return text
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;")
        .replace(/"/g, "&quot;");
}

export function renderMessages(messages: ChatMessage[]): string {
    return messages
        .map((message) => {
            const audio = message.audioRef
                ? ` <span class="audio-ref" title="bot audio">[audio: ${escapeHtml(message.audioRef)}]</span>`
                : "";
            return `<div class="msg msg-${message.role}"><span class="who">${message.role}</span>` +
                `<span class="text">${escapeHtml(message.text)}</span>${audio}</div>`;
        })
        .join("\n");
}

function verdictBadge(verdict: MetricVerdict): string {
    const label = { good: "good", needs_work: "needs work", inconclusive: "not enough data" }[
        verdict.verdict
    ];
    return `<span class="badge badge-${verdict.verdict}">${label}</span>`;
}

function clampPct(fraction: number): number {
    return Math.max(0, Math.min(100, fraction * 100));
}

function bar(valuePct: number, markers: { pct: number; label: string }[], bandPct?: [number, number]): string {
    const band = bandPct
        ? `<div class="band" style="left:${bandPct[0]}%;width:${bandPct[1] - bandPct[0]}%"></div>`
        : "";
    const markerHtml = markers
        .map((m) => `<div class="marker" style="left:${m.pct}%" data-label="${escapeHtml(m.label)}"></div>`)
        .join("");
    return `<div class="bar">${band}${markerHtml}<div class="fill" style="width:${valuePct}%"></div></div>`;
}

function metricBar(name: string, verdict: MetricVerdict): string {
    if (verdict.verdict === "inconclusive") return "";
    switch (name) {
        case "awkward":
            return bar(clampPct(verdict.value / (BANDS.awkwardMax * 1.5)), [
                { pct: clampPct(1 / 1.5), label: `limit ${BANDS.awkwardMax}` },
            ]);
        case "questions":
            return bar(clampPct(verdict.value), [
                { pct: clampPct(BANDS.questionRatioMin), label: `min ${BANDS.questionRatioMin}` },
            ]);
        case "pace": {
            const scale = 220; // wpm axis endpoint
            return (
                bar(
                    clampPct(verdict.value / scale),
                    [],
                    [clampPct(BANDS.wpmLow / scale), clampPct(BANDS.wpmHigh / scale)],
                ) + `<div class="band-label">comfortable band ${BANDS.wpmLow}–${BANDS.wpmHigh} WPM</div>`
            );
        }
        case "tics":
            return bar(clampPct(verdict.value / 5), []);
        case "acknowledgment":
            return bar(clampPct(verdict.value), [
                { pct: clampPct(BANDS.lsmMin), label: `min ${BANDS.lsmMin}` },
            ]);
        default:
            return "";
    }
}

function numericLine(name: string, verdict: MetricVerdict): string {
    if (verdict.verdict === "inconclusive") return "not enough data";
    switch (name) {
        case "awkward":
            return `${verdict.value.toFixed(0)} awkward openers (good is fewer than ${BANDS.awkwardMax})`;
        case "questions":
            return `ratio ${verdict.value.toFixed(2)} (aim for at least ${BANDS.questionRatioMin})`;
        case "pace":
            return `${verdict.value.toFixed(0)} WPM (band ${BANDS.wpmLow}–${BANDS.wpmHigh})`;
        case "tics": {
            const top = verdict.details
                .slice(0, 3)
                .map(([token, count]) => `${token} ×${count}`)
                .join(", ");
            return `${verdict.value.toFixed(0)} flagged${top ? `; most repeated: ${top}` : ""}`;
        }
        case "acknowledgment":
            return `style match ${verdict.value.toFixed(2)} (aim for at least ${BANDS.lsmMin})`;
        default:
            return String(verdict.value);
    }
}

export function renderReport(report: FeedbackReport, showDetails: boolean): string {
    const rows = METRIC_ORDER.map((name) => {
        const verdict = report[name];
        const details = showDetails
            ? `<div class="numbers">${escapeHtml(numericLine(name, verdict))}</div>`
            : "";
        const body =
            verdict.verdict === "inconclusive"
                ? `<div class="advice muted">not enough data</div>`
                : `<div class="advice">${escapeHtml(verdict.advice)}</div>`;
        return (
            `<div class="metric metric-${name} verdict-${verdict.verdict}">` +
            `<div class="metric-head"><h3>${METRIC_LABELS[name] ?? name}</h3>${verdictBadge(verdict)}</div>` +
            body +
            metricBar(name, verdict) +
            details +
            `</div>`
        );
    });
    const toggleLabel = showDetails ? "hide underlying metrics" : "show underlying metrics";
    return (
        `<div class="report">` +
        `<h2>Your conversation feedback</h2>` +
        `<button id="toggle-details" aria-pressed="${showDetails}">${toggleLabel}</button>` +
        rows.join("\n") +
        `</div>`
    );
}
