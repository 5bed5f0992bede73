/**
 * Live document pane: renders the server's XML verbatim into styled HTML.
 * Placeholders become buttons that jump to the question that fills them;
 * filled values stay visible as highlighted spans.
 */

import { SessionView } from './api';

const BLOCK_TAGS: Record<string, string> = {
    p: 'p',
    heading: 'h3',
};

export function renderDraft(
    container: HTMLElement,
    view: SessionView,
    documentUrl: string,
    onPlaceholder: (entryName: string) => void,
): void {
    container.innerHTML = '';

    const parsed = new DOMParser().parseFromString(view.document, 'application/xml');
    const main = parsed.getElementsByTagName('mainBody')[0];

    const body = document.createElement('div');
    body.className = 'draft-body';
    if (main) {
        for (const child of Array.from(main.childNodes)) {
            body.appendChild(convert(child, onPlaceholder));
        }
    }
    container.appendChild(body);

    if (view.document_mode === 'final') {
        const link = document.createElement('a');
        link.className = 'download-link';
        link.href = documentUrl;
        link.textContent = 'Download the final document';
        container.appendChild(link);
    }
}

function convert(node: Node, onPlaceholder: (entryName: string) => void): Node {
    if (node.nodeType === Node.TEXT_NODE) {
        return document.createTextNode(node.nodeValue ?? '');
    }
    if (node.nodeType !== Node.ELEMENT_NODE) {
        return document.createTextNode('');
    }
    const el = node as Element;

    if (el.tagName === 'placeholder') {
        const name = el.getAttribute('name') ?? '';
        const button = document.createElement('button');
        button.type = 'button';
        button.className = 'placeholder';
        button.dataset.entry = name;
        button.textContent = `[${name}]`;
        button.addEventListener('click', () => onPlaceholder(name));
        return button;
    }

    if (el.tagName === 'value') {
        const span = document.createElement('span');
        span.className = 'filled-value';
        span.dataset.entry = el.getAttribute('name') ?? '';
        span.textContent = el.textContent ?? '';
        return span;
    }

    const wrapper = document.createElement(BLOCK_TAGS[el.tagName] ?? 'div');
    wrapper.className = `doc-${el.tagName}`;
    for (const child of Array.from(el.childNodes)) {
        wrapper.appendChild(convert(child, onPlaceholder));
    }
    return wrapper;
}
