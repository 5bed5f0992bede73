import { beforeEach, describe, expect, it, vi } from 'vitest';

import {
    QuestionPanel,
    QuestionTarget,
    targetFromCurrent,
    targetFromProgress,
} from '../src/question';
import { viewAfterMax, viewFresh } from './fixtures';

function makePanel() {
    const container = document.createElement('div');
    document.body.appendChild(container);
    const onSubmit = vi.fn<(target: QuestionTarget, value: unknown) => void>();
    return { container, onSubmit, panel: new QuestionPanel(container, onSubmit) };
}

function submitForm(container: HTMLElement): void {
    const form = container.querySelector('form');
    expect(form).not.toBeNull();
    form!.dispatchEvent(new Event('submit', { bubbles: true, cancelable: true }));
}

beforeEach(() => {
    document.body.innerHTML = '';
});

describe('QuestionPanel', () => {
    it('renders a number question as a text input that defers validation', () => {
        const { container, panel } = makePanel();
        panel.show(targetFromCurrent(viewFresh.current!));

        const input = container.querySelector<HTMLInputElement>('.answer-input');
        expect(input!.type).toBe('text');
        expect(input!.inputMode).toBe('decimal');
        expect(container.querySelector('.question-text')!.textContent).toBe(
            viewFresh.current!.question,
        );
        expect(container.querySelector('.explanation')!.textContent).toBe(
            viewFresh.current!.explanation,
        );
        expect(container.querySelector('button[type="submit"]')!.textContent).toBe(
            'Submit answer',
        );
    });

    it('keeps the typed value on screen when showing a rejection', () => {
        const { container, panel } = makePanel();
        panel.show(targetFromCurrent(viewFresh.current!));

        const input = container.querySelector<HTMLInputElement>('.answer-input')!;
        input.value = 'ten';
        panel.showError("expected a number, got 'ten'");

        const error = container.querySelector<HTMLElement>('.error')!;
        expect(error.hidden).toBe(false);
        expect(error.textContent).toBe("expected a number, got 'ten'");
        expect(container.querySelector<HTMLInputElement>('.answer-input')).toBe(input);
        expect(input.value).toBe('ten');
    });

    it('submits the raw string for text-like inputs', () => {
        const { container, panel, onSubmit } = makePanel();
        const target = targetFromCurrent(viewFresh.current!);
        panel.show(target);

        container.querySelector<HTMLInputElement>('.answer-input')!.value = '8';
        submitForm(container);

        expect(onSubmit).toHaveBeenCalledWith(target, '8');
    });

    it('renders booleans as a checkbox and submits true or false', () => {
        const { container, panel, onSubmit } = makePanel();
        panel.show(targetFromCurrent(viewAfterMax.current!));

        const input = container.querySelector<HTMLInputElement>('.answer-input')!;
        expect(input.type).toBe('checkbox');
        expect(container.querySelector('.boolean-hint')!.textContent).toBe('yes');

        input.checked = true;
        submitForm(container);
        expect(onSubmit).toHaveBeenLastCalledWith(expect.anything(), true);

        input.checked = false;
        submitForm(container);
        expect(onSubmit).toHaveBeenLastCalledWith(expect.anything(), false);
    });

    it('renders date questions as a date input', () => {
        const { container, panel } = makePanel();
        panel.show({
            order: 1,
            question: 'When was the charge filed?',
            kind: 'date',
            explanation: null,
            revision: false,
        });

        expect(container.querySelector<HTMLInputElement>('.answer-input')!.type).toBe('date');
    });

    it('prefills a revision card with the stored answer', () => {
        const { container, panel } = makePanel();
        const answered = viewAfterMax.progress.find((item) => item.answered)!;
        panel.show(targetFromProgress(answered));

        const card = container.querySelector('form')!;
        expect(card.classList.contains('revision')).toBe(true);
        expect(container.querySelector<HTMLInputElement>('.answer-input')!.value).toBe('8');
        expect(container.querySelector('button[type="submit"]')!.textContent).toBe(
            'Revise answer',
        );
    });

    it('disables the controls while a request is in flight', () => {
        const { container, panel } = makePanel();
        panel.show(targetFromCurrent(viewFresh.current!));

        panel.setBusy(true);
        expect(container.querySelector<HTMLInputElement>('.answer-input')!.disabled).toBe(true);
        expect(
            container.querySelector<HTMLButtonElement>('button[type="submit"]')!.disabled,
        ).toBe(true);

        panel.setBusy(false);
        expect(container.querySelector<HTMLInputElement>('.answer-input')!.disabled).toBe(false);
    });

    it('shows the completion note with a download link when done', () => {
        const { container, panel } = makePanel();
        panel.showComplete('/sessions/abc/document');

        expect(container.querySelector('form')).toBeNull();
        expect(container.querySelector('.question-text')!.textContent).toBe(
            'All questions answered. The document is final.',
        );
        const link = container.querySelector<HTMLAnchorElement>('.download-link')!;
        expect(link.getAttribute('href')).toBe('/sessions/abc/document');
    });
});
