// UI session state machine. Mirrors the server contract: one request in
// flight at a time, and nothing can be sent after the conversation is done.

import {
    ApiError,
    CreateSessionResponse,
    FeedbackReport,
    TurnResponse,
} from "./api.js";

// Structural subset of ApiClient so tests can substitute fakes.
export interface SessionApi {
    createSession(nameHint?: string): Promise<CreateSessionResponse>;
    sendTurn(sessionId: string, text: string, durationMs?: number): Promise<TurnResponse>;
    getReport(sessionId: string): Promise<FeedbackReport>;
}

export type Phase = "idle" | "creating" | "ready" | "in_flight" | "done" | "error";

export interface ChatMessage {
    role: "user" | "bot" | "system";
    text: string;
    audioRef?: string | null;
}

export class SessionController {
    phase: Phase = "idle";
    sessionId: string | null = null;
    dialogueState = "";
    messages: ChatMessage[] = [];
    report: FeedbackReport | null = null;
    lastError = "";

    constructor(private readonly api: SessionApi) {}

    get canSend(): boolean {
        return this.phase === "ready";
    }

    get isDone(): boolean {
        return this.phase === "done";
    }

    async create(nameHint?: string): Promise<void> {
        if (this.phase !== "idle" && this.phase !== "error") {
            throw new Error(`cannot create a session while ${this.phase}`);
        }
        this.phase = "creating";
        try {
            const created = await this.api.createSession(nameHint);
            this.sessionId = created.session_id;
            this.dialogueState = created.state;
            this.messages.push({ role: "bot", text: created.bot_text });
            this.phase = "ready";
        } catch (err) {
            this.phase = "error";
            this.lastError = errorText(err);
            throw err;
        }
    }

    async send(text: string, durationMs?: number): Promise<void> {
        if (!this.canSend || this.sessionId === null) {
            throw new Error("input is disabled: no turn may be sent right now");
        }
        const trimmed = text.trim();
        if (!trimmed) return;
        this.phase = "in_flight";
        this.messages.push({ role: "user", text: trimmed });
        try {
            const reply = await this.api.sendTurn(this.sessionId, trimmed, durationMs);
            this.dialogueState = reply.state;
            this.messages.push({ role: "bot", text: reply.bot_text, audioRef: reply.bot_audio_ref });
            this.phase = reply.done ? "done" : "ready";
        } catch (err) {
            if (err instanceof ApiError && err.status === 409) {
                // busy or ended: keep input disabled and surface a notice
                this.messages.push({ role: "system", text: "Please wait for the current turn to finish." });
                this.phase = "ready";
                return;
            }
            this.phase = "error";
            this.lastError = errorText(err);
            throw err;
        }
    }

    async loadReport(): Promise<FeedbackReport> {
        if (this.sessionId === null) throw new Error("no session yet");
        this.report = await this.api.getReport(this.sessionId);
        return this.report;
    }
}

function errorText(err: unknown): string {
    return err instanceof Error ? err.message : String(err);
}
