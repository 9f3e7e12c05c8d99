import { describe, expect, it } from "vitest";

import { ApiError, FeedbackReport, MetricVerdict, TurnResponse } from "../src/api.js";
import { renderMessages, renderReport } from "../src/render.js";
import { SessionApi, SessionController } from "../src/state.js";

function verdict(name: string, overrides: Partial<MetricVerdict> = {}): MetricVerdict {
    return {
        metric_name: name,
        value: 1,
        verdict: "good",
        advice: "Looking sharp.",
        details: [],
        ...overrides,
    };
}

function report(overrides: Partial<FeedbackReport> = {}): FeedbackReport {
    return {
        awkward: verdict("awkward_transitions", { value: 2 }),
        questions: verdict("questions", { value: 0.45 }),
        pace: verdict("pace", { value: 134 }),
        tics: verdict("tics", { value: 0 }),
        acknowledgment: verdict("acknowledgment", { value: 0.91 }),
        generated_at: "2026-08-11T00:00:00+00:00",
        ...overrides,
    };
}

function fakeApi(turns: TurnResponse[], rep: FeedbackReport = report()): SessionApi {
    let turnIndex = 0;
    return {
        async createSession() {
            return { session_id: "s1", bot_text: "Hello, what is your name?", state: "intro_new_user" };
        },
        async sendTurn() {
            const next = turns[Math.min(turnIndex, turns.length - 1)];
            turnIndex += 1;
            if (!next) throw new Error("no scripted turn");
            return next;
        },
        async getReport() {
            return rep;
        },
    };
}

const turnReply = (state: string, done = false): TurnResponse => ({
    bot_text: `prompt in ${state}`,
    state,
    done,
    bot_audio_ref: null,
});

describe("SessionController", () => {
    it("moves idle -> ready on create and records the greeting", async () => {
        const controller = new SessionController(fakeApi([]));
        await controller.create("Max");
        expect(controller.phase).toBe("ready");
        expect(controller.messages[0]).toMatchObject({ role: "bot" });
        expect(controller.canSend).toBe(true);
    });

    it("disables sending while a turn is in flight", async () => {
        let release: (value: TurnResponse) => void = () => {};
        const pending = new Promise<TurnResponse>((resolve) => (release = resolve));
        const api: SessionApi = {
            ...fakeApi([]),
            sendTurn: () => pending,
        };
        const controller = new SessionController(api);
        await controller.create();
        const sending = controller.send("hello there");
        expect(controller.phase).toBe("in_flight");
        expect(controller.canSend).toBe(false);
        await expect(controller.send("second")).rejects.toThrow(/disabled/);
        release(turnReply("health"));
        await sending;
        expect(controller.phase).toBe("ready");
    });

    it("refuses to send after done", async () => {
        const controller = new SessionController(fakeApi([turnReply("end", true)]));
        await controller.create();
        await controller.send("bye");
        expect(controller.isDone).toBe(true);
        expect(controller.canSend).toBe(false);
        await expect(controller.send("more")).rejects.toThrow(/disabled/);
    });

    it("keeps input usable after a 409 busy reply", async () => {
        const api: SessionApi = {
            ...fakeApi([]),
            async sendTurn() {
                throw new ApiError(409, "turn already in flight");
            },
        };
        const controller = new SessionController(api);
        await controller.create();
        await controller.send("hi again");
        expect(controller.phase).toBe("ready");
        expect(controller.messages.at(-1)).toMatchObject({ role: "system" });
    });

    it("loads the report after done", async () => {
        const controller = new SessionController(fakeApi([turnReply("end", true)]));
        await controller.create();
        await controller.send("bye");
        const loaded = await controller.loadReport();
        expect(loaded.pace.value).toBe(134);
    });
});

describe("renderMessages", () => {
    it("escapes html and shows audio refs", () => {
        const html = renderMessages([
            { role: "bot", text: "<b>hi</b>", audioRef: "bot-0001.txt" },
            { role: "user", text: "hello" },
        ]);
        expect(html).toContain("&lt;b&gt;hi&lt;/b&gt;");
        expect(html).toContain("bot-0001.txt");
        expect(html).not.toContain("<b>hi</b>");
    });
});

describe("renderReport", () => {
    it("renders all five metrics", () => {
        const html = renderReport(report(), false);
        for (const label of [
            "Awkward transitions",
            "Questions asked",
            "Speaking pace",
            "Overused words",
            "Attention to partner",
        ]) {
            expect(html).toContain(label);
        }
    });

    it("renders the wpm band 120-150", () => {
        const html = renderReport(report(), false);
        expect(html).toContain("120–150");
    });

    it("hides numeric values until toggled", () => {
        const hidden = renderReport(report(), false);
        const shown = renderReport(report(), true);
        expect(hidden).not.toContain("134 WPM");
        expect(shown).toContain("134 WPM");
        expect(shown).toContain("ratio 0.45");
        expect(hidden).toContain("show underlying metrics");
        expect(shown).toContain("hide underlying metrics");
    });

    it("renders inconclusive rows as not enough data", () => {
        const r = report({
            acknowledgment: verdict("acknowledgment", { verdict: "inconclusive", advice: "" }),
        });
        const html = renderReport(r, true);
        expect(html).toContain("not enough data");
    });
});
