// End-to-end: boot the real backend with stub providers, complete a scripted
// demo conversation through the UI controller, and render the report screen.

import { ChildProcess, spawn } from "node:child_process";
import { mkdtempSync } from "node:fs";
import net from "node:net";
import os from "node:os";
import path from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { renderMessages, renderReport } from "../src/render.js";
import { SessionController } from "../src/state.js";

const DEMO_BODY: string[] = [
    "my name is Demo",
    "I am doing great, thanks! How are you?",
    "I have been planning a big trip lately",
    "yes I eat healthy every day",
    "yes I work out daily",
    "I keep my weekends completely free of work",
    "I am from Graz",
    "I would rather live in Lisbon",
    "maybe Japan someday?",
    "you should try the old town and the castle hill",
    "yes absolutely, solo travel sounds exciting",
    "I love a good mystery movie",
    "mystery I would say",
    "probably the classic crime composers?",
    "the detective obviously",
    "yes that sounds exactly like my kind of thing",
    "I read a lot of crime novels too",
    "mostly on rainy weekends",
    "yes I would recommend it to anyone",
    "it started when I was a kid",
    "my grandmother gave me a mystery box set",
    "that is the whole story really",
];

function demoReply(state: string, counters: { body: number; survey: number }): string {
    if (state === "feedback_delivery") return "yes, tell me the underlying metrics please";
    if (state === "feedback_detail") return "that all makes sense to me";
    if (state === "survey") {
        const surveyReplies = ["no, you did really well", "no, you were easy to understand", "5"];
        const reply = surveyReplies[Math.min(counters.survey, surveyReplies.length - 1)]!;
        counters.survey += 1;
        return reply;
    }
    const reply = DEMO_BODY[counters.body % DEMO_BODY.length]!;
    counters.body += 1;
    return reply;
}

function freePort(): Promise<number> {
    return new Promise((resolve, reject) => {
        const server = net.createServer();
        server.listen(0, "127.0.0.1", () => {
            const address = server.address();
            if (address && typeof address === "object") {
                const port = address.port;
                server.close(() => resolve(port));
            } else {
                server.close(() => reject(new Error("no port")));
            }
        });
    });
}

let serverProcess: ChildProcess | null = null;
let api: ApiClient;

beforeAll(async () => {
    const port = await freePort();
    const store = mkdtempSync(path.join(os.tmpdir(), "talkcoach-e2e-"));
    serverProcess = spawn(
        "python3",
        [
            "-m",
            "talkcoach",
            "serve",
            "--port",
            String(port),
            "--store",
            store,
            "--providers",
            "stub",
            "--min-turns",
            "8",
        ],
        { stdio: "ignore" },
    );
    api = new ApiClient(`http://127.0.0.1:${port}`);
    const deadline = Date.now() + 20_000;
    while (!(await api.health())) {
        if (Date.now() > deadline) throw new Error("backend did not come up");
        await new Promise((resolve) => setTimeout(resolve, 150));
    }
}, 30_000);

afterAll(() => {
    serverProcess?.kill();
});

describe("demo conversation against the stub server", () => {
    it("completes a session and renders the full report screen", async () => {
        const controller = new SessionController(api);
        await controller.create("Demo");
        expect(controller.canSend).toBe(true);
        expect(controller.messages[0]?.text.toLowerCase()).toContain("what is your name");

        const counters = { body: 0, survey: 0 };
        for (let turn = 0; turn < 80 && !controller.isDone; turn += 1) {
            await controller.send(demoReply(controller.dialogueState, counters));
        }
        expect(controller.isDone).toBe(true);
        expect(controller.canSend).toBe(false);

        const chatHtml = renderMessages(controller.messages);
        expect(chatHtml).toContain("msg-user");
        expect(chatHtml).toContain("msg-bot");

        const report = await controller.loadReport();
        const summary = renderReport(report, false);
        for (const label of [
            "Awkward transitions",
            "Questions asked",
            "Speaking pace",
            "Overused words",
            "Attention to partner",
        ]) {
            expect(summary).toContain(label);
        }
        // the wpm band is drawn on the summary screen
        expect(summary).toContain("120–150");
        expect(summary).toContain("show underlying metrics");

        // toggling reveals the numeric values
        const detailed = renderReport(report, true);
        expect(detailed).toContain("WPM (band 120–150)");
        expect(detailed).toMatch(/ratio \d\.\d\d/);
        expect(detailed).toContain("hide underlying metrics");
    }, 60_000);

    it("second session under the same name gets the returning greeting", async () => {
        const controller = new SessionController(api);
        await controller.create("Demo");
        expect(controller.messages[0]?.text.toLowerCase()).toContain("welcome back");
    }, 30_000);
});
