/**
 * The question card: kind-specific input, the step's explanation, and an
 * inline error slot. Rejections only ever touch the error slot, so the
 * user's input survives a 422 untouched.
 */

import { AnswerKind, CurrentStep, ProgressItem } from './api';

export interface QuestionTarget {
    order: number;
    question: string;
    kind: AnswerKind;
    explanation: string | null;
    value?: string;
    revision: boolean;
}

export function targetFromCurrent(current: CurrentStep): QuestionTarget {
    return {
        order: current.order,
        question: current.question,
        kind: current.kind,
        explanation: current.explanation,
        revision: false,
    };
}

export function targetFromProgress(item: ProgressItem): QuestionTarget {
    // Progress items carry no explanation; revision shows the bare question.
    return {
        order: item.order,
        question: item.question,
        kind: item.kind,
        explanation: null,
        value: item.value,
        revision: true,
    };
}

export class QuestionPanel {
    private target: QuestionTarget | null = null;
    private input: HTMLInputElement | null = null;
    private submit: HTMLButtonElement | null = null;
    private error: HTMLElement | null = null;

    constructor(
        private readonly container: HTMLElement,
        private readonly onSubmit: (target: QuestionTarget, value: unknown) => void,
    ) {}

    /** Render a question, replacing whatever the panel showed before. */
    show(target: QuestionTarget): void {
        this.target = target;
        this.container.innerHTML = '';

        const card = document.createElement('form');
        card.className = target.revision ? 'question-card revision' : 'question-card';
        card.addEventListener('submit', (event) => {
            event.preventDefault();
            if (this.target && this.input) {
                this.onSubmit(this.target, this.readValue());
            }
        });

        const heading = document.createElement('p');
        heading.className = 'question-text';
        heading.textContent = target.question;
        card.appendChild(heading);

        const field = document.createElement('label');
        field.className = 'question-field';
        this.input = buildInput(target);
        field.appendChild(this.input);
        if (target.kind === 'boolean') {
            const hint = document.createElement('span');
            hint.className = 'boolean-hint';
            hint.textContent = 'yes';
            field.appendChild(hint);
        }
        card.appendChild(field);

        this.error = document.createElement('p');
        this.error.className = 'error';
        this.error.hidden = true;
        card.appendChild(this.error);

        this.submit = document.createElement('button');
        this.submit.type = 'submit';
        this.submit.textContent = target.revision ? 'Revise answer' : 'Submit answer';
        card.appendChild(this.submit);

        if (target.explanation) {
            const explanation = document.createElement('aside');
            explanation.className = 'explanation';
            explanation.textContent = target.explanation;
            card.appendChild(explanation);
        }

        this.container.appendChild(card);
    }

    /** Replace the card with the completion note and a download link. */
    showComplete(documentUrl: string): void {
        this.target = null;
        this.input = null;
        this.submit = null;
        this.error = null;
        this.container.innerHTML = '';

        const note = document.createElement('div');
        note.className = 'question-card complete';
        const text = document.createElement('p');
        text.className = 'question-text';
        text.textContent = 'All questions answered. The document is final.';
        note.appendChild(text);
        const link = document.createElement('a');
        link.className = 'download-link';
        link.href = documentUrl;
        link.textContent = 'Download the final document';
        note.appendChild(link);
        this.container.appendChild(note);
    }

    /** Show a rejection message without touching the input. */
    showError(message: string): void {
        if (this.error) {
            this.error.textContent = message;
            this.error.hidden = false;
        }
    }

    setBusy(busy: boolean): void {
        if (this.input) this.input.disabled = busy;
        if (this.submit) this.submit.disabled = busy;
    }

    focusInput(): void {
        this.input?.focus();
    }

    private readValue(): unknown {
        if (!this.input || !this.target) return null;
        if (this.target.kind === 'boolean') return this.input.checked;
        return this.input.value;
    }
}

function buildInput(target: QuestionTarget): HTMLInputElement {
    const input = document.createElement('input');
    input.className = 'answer-input';
    switch (target.kind) {
        case 'boolean':
            input.type = 'checkbox';
            input.checked = target.value === 'true';
            break;
        case 'date':
            input.type = 'date';
            input.value = target.value ?? '';
            break;
        case 'number':
            // Deliberately a text input: the service is the validator, and
            // its expected-kind message must be reachable from the UI.
            input.type = 'text';
            input.inputMode = 'decimal';
            input.value = target.value ?? '';
            break;
        case 'text':
            input.type = 'text';
            input.value = target.value ?? '';
            break;
    }
    return input;
}
