/**
 * Screen orchestration. The config picker starts a session; the session
 * screen repaints every pane verbatim from each server snapshot. The
 * client holds no derived truth: whatever the service last sent is what
 * is on screen.
 */

import {
    AnswerRejected,
    ApiClient,
    ProgressItem,
    RequestFailed,
    ServiceUnreachable,
    SessionView,
} from './api';
import { renderDraft } from './draft';
import { renderGraph } from './graph';
import { renderProgress } from './progress';
import {
    QuestionPanel,
    QuestionTarget,
    targetFromCurrent,
    targetFromProgress,
} from './question';

interface Panes {
    banner: HTMLElement;
    status: HTMLElement;
    progress: HTMLElement;
    question: HTMLElement;
    draft: HTMLElement;
    graph: HTMLElement;
}

const SESSION_HASH = /^#\/s\/([A-Za-z0-9_-]+)$/;

export class App {
    private view: SessionView | null = null;
    private panes: Panes | null = null;
    private panel: QuestionPanel | null = null;
    private inflight: Promise<void> = Promise.resolve();

    constructor(
        private readonly root: HTMLElement,
        private readonly api: ApiClient,
    ) {}

    start(): Promise<void> {
        return this.track(() => this.route());
    }

    /** Resolves once every started interaction has settled. */
    idle(): Promise<void> {
        return this.inflight;
    }

    /** Serialize interactions: one active request per session. */
    private track(action: () => Promise<void>): Promise<void> {
        const run = this.inflight.then(action, action);
        this.inflight = run.then(
            () => undefined,
            () => undefined,
        );
        return run;
    }

    private async route(): Promise<void> {
        const match = SESSION_HASH.exec(window.location.hash);
        if (!match) {
            await this.showConfigList();
            return;
        }
        const sessionId = match[1];
        try {
            this.paint(await this.api.getSession(sessionId));
        } catch (err) {
            this.handle(err, () => this.route());
        }
    }

    private async showConfigList(): Promise<void> {
        let configs;
        try {
            configs = await this.api.listConfigs();
        } catch (err) {
            this.handle(err, () => this.route());
            return;
        }

        this.view = null;
        this.panes = null;
        this.panel = null;
        this.root.innerHTML = '';

        const picker = document.createElement('section');
        picker.className = 'config-picker';
        const heading = document.createElement('h2');
        heading.textContent = 'Choose an interview';
        picker.appendChild(heading);

        const list = document.createElement('ul');
        list.className = 'config-list';
        for (const config of configs) {
            const item = document.createElement('li');
            const button = document.createElement('button');
            button.type = 'button';
            button.dataset.configId = config.id;
            button.textContent = config.title ?? config.id;
            button.addEventListener('click', () => {
                void this.track(() => this.startSession(config.id));
            });
            item.appendChild(button);
            list.appendChild(item);
        }
        picker.appendChild(list);
        this.root.appendChild(picker);
    }

    private async startSession(configId: string): Promise<void> {
        try {
            const view = await this.api.createSession(configId);
            window.history.replaceState(null, '', `#/s/${view.session_id}`);
            this.paint(view);
        } catch (err) {
            this.handle(err, () => this.startSession(configId));
        }
    }

    /** Build the session screen skeleton once; panes are filled per paint. */
    private buildPanes(): Panes {
        this.root.innerHTML = '';

        const banner = document.createElement('div');
        banner.className = 'banner-slot';
        this.root.appendChild(banner);

        const status = document.createElement('header');
        status.className = 'status-bar';
        this.root.appendChild(status);

        const main = document.createElement('main');
        main.className = 'session-grid';

        const progress = document.createElement('aside');
        progress.className = 'pane progress-pane';
        main.appendChild(progress);

        const question = document.createElement('section');
        question.className = 'pane question-pane';
        main.appendChild(question);

        const draft = document.createElement('section');
        draft.className = 'pane draft-pane';
        main.appendChild(draft);

        const graph = document.createElement('section');
        graph.className = 'pane graph-pane';
        main.appendChild(graph);

        this.root.appendChild(main);
        return { banner, status, progress, question, draft, graph };
    }

    private paint(view: SessionView): void {
        this.view = view;
        if (!this.panes) {
            this.panes = this.buildPanes();
            this.panel = new QuestionPanel(this.panes.question, (target, value) => {
                void this.track(() => this.submit(target, value));
            });
        }
        const panes = this.panes;
        panes.banner.innerHTML = '';

        const answered = view.progress.filter((item) => item.answered).length;
        panes.status.textContent =
            `${view.config_id}: ${answered} of ${view.progress.length} answered, ` +
            `${view.status}, document ${view.document_mode}`;

        renderProgress(panes.progress, view, (item) => this.beginRevision(item));

        if (view.current) {
            this.panel!.show(targetFromCurrent(view.current));
        } else {
            this.panel!.showComplete(this.api.documentUrl(view.session_id));
        }

        renderDraft(
            panes.draft,
            view,
            this.api.documentUrl(view.session_id),
            (entryName) => this.focusEntry(entryName),
        );
        renderGraph(panes.graph, view.graph);
    }

    private async submit(target: QuestionTarget, value: unknown): Promise<void> {
        if (!this.view || !this.panel) return;
        const sessionId = this.view.session_id;
        this.panel.setBusy(true);
        try {
            const next = target.revision
                ? await this.api.reviseAnswer(sessionId, target.order, value)
                : await this.api.submitAnswer(sessionId, value);
            this.paint(next);
        } catch (err) {
            this.panel.setBusy(false);
            if (err instanceof AnswerRejected) {
                this.panel.showError(err.rejection.message);
            } else {
                this.handle(err, () => this.submit(target, value));
            }
        }
    }

    private beginRevision(item: ProgressItem): void {
        if (!item.answered || !this.panel) return;
        this.panel.show(targetFromProgress(item));
        this.panel.focusInput();
    }

    /** A clicked placeholder jumps to the question that fills it. */
    private focusEntry(entryName: string): void {
        if (!this.view || !this.panel) return;
        const item = this.view.progress.find((step) => step.entry === entryName);
        if (!item) return;
        if (this.view.current && this.view.current.order === item.order) {
            this.panel.focusInput();
        } else if (item.answered) {
            this.beginRevision(item);
        }
    }

    private handle(err: unknown, retry: () => Promise<void>): void {
        if (err instanceof ServiceUnreachable) {
            this.showRetryBanner('The service is unreachable.', retry);
            return;
        }
        if (err instanceof RequestFailed) {
            this.showFatal(err.message);
            return;
        }
        throw err;
    }

    private showRetryBanner(message: string, retry: () => Promise<void>): void {
        const slot = this.panes?.banner ?? this.ensureTopSlot();
        slot.innerHTML = '';
        const banner = document.createElement('div');
        banner.className = 'banner retry-banner';
        const text = document.createElement('span');
        text.textContent = message;
        banner.appendChild(text);
        const button = document.createElement('button');
        button.type = 'button';
        button.textContent = 'Retry';
        button.addEventListener('click', () => {
            slot.innerHTML = '';
            void this.track(retry);
        });
        banner.appendChild(button);
        slot.appendChild(banner);
    }

    private showFatal(message: string): void {
        this.root.innerHTML = '';
        const error = document.createElement('p');
        error.className = 'fatal-error';
        error.textContent = message;
        this.root.appendChild(error);
    }

    private ensureTopSlot(): HTMLElement {
        let slot = this.root.querySelector<HTMLElement>('.banner-slot');
        if (!slot) {
            slot = document.createElement('div');
            slot.className = 'banner-slot';
            this.root.prepend(slot);
        }
        return slot;
    }
}
