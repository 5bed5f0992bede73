/**
 * Progress rail: one entry per interview step. Answered entries are
 * buttons that reopen the step for revision; the current step is marked
 * active and everything later stays disabled until its turn.
 */

import { ProgressItem, SessionView } from './api';

export function renderProgress(
    container: HTMLElement,
    view: SessionView,
    onRevisit: (item: ProgressItem) => void,
): void {
    container.innerHTML = '';
    const list = document.createElement('ol');
    list.className = 'progress-rail';
    for (const item of view.progress) {
        const entry = document.createElement('li');
        entry.dataset.order = String(item.order);
        if (item.answered) entry.classList.add('answered');
        if (view.current && view.current.order === item.order) {
            entry.classList.add('active');
        }

        const button = document.createElement('button');
        button.type = 'button';
        button.disabled = !item.answered;
        button.addEventListener('click', () => onRevisit(item));

        const question = document.createElement('span');
        question.className = 'progress-question';
        question.textContent = item.question;
        button.appendChild(question);

        if (item.answered && item.value !== undefined) {
            const value = document.createElement('span');
            value.className = 'progress-value';
            value.textContent = item.value;
            button.appendChild(value);
        }

        entry.appendChild(button);
        list.appendChild(entry);
    }
    container.appendChild(list);
}
