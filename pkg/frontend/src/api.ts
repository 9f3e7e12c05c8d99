// Typed client for the talkcoach session API.

export interface CreateSessionResponse {
    session_id: string;
    bot_text: string;
    state: string;
}

export interface TurnResponse {
    bot_text: string;
    state: string;
    done: boolean;
    bot_audio_ref: string | null;
}

export type VerdictKind = "good" | "needs_work" | "inconclusive";

export interface MetricVerdict {
    metric_name: string;
    value: number;
    verdict: VerdictKind;
    advice: string;
    details: [string, number][];
}

export interface FeedbackReport {
    awkward: MetricVerdict;
    questions: MetricVerdict;
    pace: MetricVerdict;
    tics: MetricVerdict;
    acknowledgment: MetricVerdict;
    generated_at: string;
}

export class ApiError extends Error {
    constructor(readonly status: number, message: string) {
        super(message);
        this.name = "ApiError";
    }
}

async function parseOrThrow<T>(response: Response): Promise<T> {
    if (!response.ok) {
        let detail = response.statusText;
        try {
            const body = await response.json();
            if (body && body.detail) detail = JSON.stringify(body.detail);
        } catch {
            // non-JSON error body; keep the status text
        }
        throw new ApiError(response.status, detail);
    }
    return response.json() as Promise<T>;
}

export class ApiClient {
    constructor(readonly baseUrl: string) {}

    async health(): Promise<boolean> {
        try {
            const response = await fetch(`${this.baseUrl}/health`);
            return response.ok;
        } catch {
            return false;
        }
    }

    createSession(nameHint?: string): Promise<CreateSessionResponse> {
        return this.post("/sessions", nameHint ? { name_hint: nameHint } : {});
    }

    sendTurn(sessionId: string, text: string, durationMs?: number): Promise<TurnResponse> {
        const body: Record<string, unknown> = { text };
        if (durationMs !== undefined) body.duration_ms = durationMs;
        return this.post(`/sessions/${sessionId}/turn`, body);
    }

    sendAudioTurn(sessionId: string, audioRef: string): Promise<TurnResponse> {
        return this.post(`/sessions/${sessionId}/turn`, { audio_ref: audioRef });
    }

    async getReport(sessionId: string): Promise<FeedbackReport> {
        const response = await fetch(`${this.baseUrl}/sessions/${sessionId}/report`);
        return parseOrThrow<FeedbackReport>(response);
    }

    private async post<T>(path: string, body: unknown): Promise<T> {
        const response = await fetch(`${this.baseUrl}${path}`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(body),
        });
        return parseOrThrow<T>(response);
    }
}
