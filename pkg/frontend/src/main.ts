// Browser wiring: session screen first, report screen once the session ends.

import { ApiClient } from "./api.js";
import { renderMessages, renderReport } from "./render.js";
import { SessionController } from "./state.js";

const api = new ApiClient(
    (window as unknown as { TALKCOACH_API?: string }).TALKCOACH_API ?? "http://127.0.0.1:8077",
);
const controller = new SessionController(api);
let showDetails = false;

const el = {
    log: document.getElementById("chat-log") as HTMLDivElement,
    input: document.getElementById("chat-input") as HTMLInputElement,
    send: document.getElementById("chat-send") as HTMLButtonElement,
    status: document.getElementById("state-badge") as HTMLSpanElement,
    report: document.getElementById("report-view") as HTMLDivElement,
    nameInput: document.getElementById("name-input") as HTMLInputElement,
    start: document.getElementById("start-button") as HTMLButtonElement,
};

function refresh(): void {
    el.log.innerHTML = renderMessages(controller.messages);
    el.log.scrollTop = el.log.scrollHeight;
    el.status.textContent = controller.dialogueState || "not started";
    const enabled = controller.canSend;
    el.input.disabled = !enabled;
    el.send.disabled = !enabled;
    if (controller.report) {
        el.report.innerHTML = renderReport(controller.report, showDetails);
        const toggle = document.getElementById("toggle-details");
        toggle?.addEventListener("click", () => {
            showDetails = !showDetails;
            refresh();
        });
    }
}

async function start(): Promise<void> {
    el.start.disabled = true;
    try {
        await controller.create(el.nameInput.value.trim() || undefined);
    } catch (err) {
        el.status.textContent = `error: ${controller.lastError}`;
        el.start.disabled = false;
        return;
    }
    refresh();
    el.input.focus();
}

async function send(): Promise<void> {
    const text = el.input.value;
    if (!text.trim() || !controller.canSend) return;
    el.input.value = "";
    refresh();
    try {
        await controller.send(text);
    } catch {
        el.status.textContent = `error: ${controller.lastError}`;
    }
    refresh();
    if (controller.isDone) {
        await controller.loadReport();
        refresh();
        el.report.scrollIntoView({ behavior: "smooth" });
    }
}

el.start.addEventListener("click", () => void start());
el.send.addEventListener("click", () => void send());
el.input.addEventListener("keydown", (event) => {
    if (event.key === "Enter") void send();
});
