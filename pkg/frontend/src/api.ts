/**
 * Typed client for the assembly service HTTP API.
 *
 * Every method resolves to the verbatim response body; the three error
 * classes keep "the answer was rejected", "the request failed", and
 * "the service is down" distinguishable for the UI.
 */

export type AnswerKind = 'text' | 'number' | 'boolean' | 'date';

export interface ConfigInfo {
    id: string;
    title: string | null;
    goal: string;
}

export interface ProgressItem {
    order: number;
    entry: string;
    question: string;
    kind: AnswerKind;
    answered: boolean;
    value?: string;
}

export interface CurrentStep {
    order: number;
    question: string;
    kind: AnswerKind;
    explanation: string | null;
}

export interface GraphNode {
    id: string;
    kind: 'predicate' | 'rule';
    label: string;
    strength?: string;
    defeated?: boolean;
}

export interface GraphEdge {
    from: string;
    to: string;
    kind: 'premise-of' | 'concludes' | 'defeats';
}

export interface ArgumentGraph {
    nodes: GraphNode[];
    edges: GraphEdge[];
}

export interface Conclusion {
    tag: string;
    literal: string;
}

export interface SessionView {
    session_id: string;
    config_id: string;
    status: 'in-progress' | 'complete';
    progress: ProgressItem[];
    current: CurrentStep | null;
    document: string;
    document_mode: 'draft' | 'final';
    unresolved: string[];
    conclusions: Conclusion[];
    graph: ArgumentGraph;
}

export interface Rejection {
    expected: string | null;
    step: number | null;
    message: string;
}

/** The service rejected an answer (HTTP 422). */
export class AnswerRejected extends Error {
    constructor(readonly rejection: Rejection) {
        super(rejection.message);
        this.name = 'AnswerRejected';
    }
}

/** Any other non-2xx response. */
export class RequestFailed extends Error {
    constructor(readonly status: number, message: string) {
        super(message);
        this.name = 'RequestFailed';
    }
}

/** The service could not be reached at all. */
export class ServiceUnreachable extends Error {
    constructor(cause: unknown) {
        super('service unreachable', { cause });
        this.name = 'ServiceUnreachable';
    }
}

type FetchLike = typeof fetch;

export class ApiClient {
    constructor(
        private readonly baseUrl: string = '',
        private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
    ) {}

    listConfigs(): Promise<ConfigInfo[]> {
        return this.request('GET', '/configs');
    }

    createSession(configId: string): Promise<SessionView> {
        return this.request('POST', '/sessions', { config_id: configId });
    }

    getSession(sessionId: string): Promise<SessionView> {
        return this.request('GET', `/sessions/${sessionId}`);
    }

    submitAnswer(sessionId: string, value: unknown): Promise<SessionView> {
        return this.request('POST', `/sessions/${sessionId}/answers`, { value });
    }

    reviseAnswer(sessionId: string, step: number, value: unknown): Promise<SessionView> {
        return this.request('PUT', `/sessions/${sessionId}/answers/${step}`, { value });
    }

    documentUrl(sessionId: string): string {
        return `${this.baseUrl}/sessions/${sessionId}/document`;
    }

    private async request<T>(method: string, path: string, body?: object): Promise<T> {
        let response: Response;
        try {
            response = await this.fetchImpl(this.baseUrl + path, {
                method,
                headers: body === undefined ? undefined : { 'Content-Type': 'application/json' },
                body: body === undefined ? undefined : JSON.stringify(body),
            });
        } catch (err) {
            throw new ServiceUnreachable(err);
        }
        if (response.status === 422) {
            throw new AnswerRejected((await response.json()) as Rejection);
        }
        if (!response.ok) {
            let message = `request failed with status ${response.status}`;
            try {
                const payload: unknown = await response.json();
                if (
                    typeof payload === 'object' && payload !== null &&
                    typeof (payload as { message?: unknown }).message === 'string'
                ) {
                    message = (payload as { message: string }).message;
                }
            } catch {
                // keep the generic message
            }
            throw new RequestFailed(response.status, message);
        }
        return (await response.json()) as T;
    }
}
