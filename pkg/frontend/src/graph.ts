/**
 * Argument-graph pane: SVG rendering of the node/edge JSON with the same
 * visual language as the DOT export. Predicates are boxes, rules are
 * circles, defeated rules and defeats edges are dashed.
 */

import { ArgumentGraph, GraphNode } from './api';

const SVG_NS = 'http://www.w3.org/2000/svg';
const COLUMN_WIDTH = 210;
const ROW_HEIGHT = 70;
const MARGIN = 30;
const RULE_RADIUS = 26;
const BOX_HEIGHT = 32;

interface Placed {
    node: GraphNode;
    x: number;
    y: number;
}

export function renderGraph(container: HTMLElement, graph: ArgumentGraph): void {
    container.innerHTML = '';
    if (graph.nodes.length === 0) {
        const empty = document.createElement('p');
        empty.className = 'graph-empty';
        empty.textContent = 'No conclusions yet.';
        container.appendChild(empty);
        return;
    }

    const placed = layout(graph);
    const width = (Math.max(...[...placed.values()].map((p) => p.x)) || 0) + COLUMN_WIDTH;
    const height = (Math.max(...[...placed.values()].map((p) => p.y)) || 0) + ROW_HEIGHT;

    const svg = document.createElementNS(SVG_NS, 'svg');
    svg.setAttribute('class', 'argument-graph');
    svg.setAttribute('viewBox', `0 0 ${width} ${height}`);
    svg.setAttribute('role', 'img');

    for (const edge of graph.edges) {
        const from = placed.get(edge.from);
        const to = placed.get(edge.to);
        if (!from || !to) continue;
        const line = document.createElementNS(SVG_NS, 'line');
        line.setAttribute('class', `edge ${edge.kind}`);
        line.setAttribute('x1', String(from.x));
        line.setAttribute('y1', String(from.y));
        line.setAttribute('x2', String(to.x));
        line.setAttribute('y2', String(to.y));
        if (edge.kind === 'defeats') {
            line.setAttribute('stroke-dasharray', '6 4');
        }
        svg.appendChild(line);
    }

    for (const { node, x, y } of placed.values()) {
        svg.appendChild(drawNode(node, x, y));
    }

    container.appendChild(svg);
}

function drawNode(node: GraphNode, x: number, y: number): SVGElement {
    const group = document.createElementNS(SVG_NS, 'g');
    const classes = ['node', node.kind];
    if (node.defeated) classes.push('defeated');
    group.setAttribute('class', classes.join(' '));
    group.dataset.id = node.id;

    let shape: SVGElement;
    if (node.kind === 'rule') {
        shape = document.createElementNS(SVG_NS, 'circle');
        shape.setAttribute('cx', String(x));
        shape.setAttribute('cy', String(y));
        shape.setAttribute('r', String(RULE_RADIUS));
    } else {
        const boxWidth = node.label.length * 7 + 18;
        shape = document.createElementNS(SVG_NS, 'rect');
        shape.setAttribute('x', String(x - boxWidth / 2));
        shape.setAttribute('y', String(y - BOX_HEIGHT / 2));
        shape.setAttribute('width', String(boxWidth));
        shape.setAttribute('height', String(BOX_HEIGHT));
    }
    if (node.defeated) {
        shape.setAttribute('stroke-dasharray', '4 3');
    }
    group.appendChild(shape);

    const text = document.createElementNS(SVG_NS, 'text');
    text.setAttribute('x', String(x));
    text.setAttribute('y', String(node.kind === 'rule' ? y + RULE_RADIUS + 14 : y + 5));
    text.setAttribute('text-anchor', 'middle');
    text.textContent = node.label;
    group.appendChild(text);

    const title = document.createElementNS(SVG_NS, 'title');
    title.textContent = node.strength ? `${node.id} (${node.strength})` : node.id;
    group.appendChild(title);

    return group;
}

/**
 * Longest-path layering over the premise-of and concludes edges (proof
 * traces are acyclic, so these form a DAG); defeats edges are drawn but
 * do not influence placement.
 */
function layout(graph: ArgumentGraph): Map<string, Placed> {
    const incoming = new Map<string, string[]>();
    for (const node of graph.nodes) incoming.set(node.id, []);
    for (const edge of graph.edges) {
        if (edge.kind === 'defeats') continue;
        incoming.get(edge.to)?.push(edge.from);
    }

    const layers = new Map<string, number>();
    const layerOf = (id: string): number => {
        const known = layers.get(id);
        if (known !== undefined) return known;
        const sources = incoming.get(id) ?? [];
        const layer = sources.length
            ? 1 + Math.max(...sources.map(layerOf))
            : 0;
        layers.set(id, layer);
        return layer;
    };

    const placed = new Map<string, Placed>();
    const rows = new Map<number, number>();
    for (const node of graph.nodes) {
        const layer = layerOf(node.id);
        const row = rows.get(layer) ?? 0;
        rows.set(layer, row + 1);
        placed.set(node.id, {
            node,
            x: MARGIN + COLUMN_WIDTH / 2 + layer * COLUMN_WIDTH,
            y: MARGIN + ROW_HEIGHT / 2 + row * ROW_HEIGHT,
        });
    }
    return placed;
}
