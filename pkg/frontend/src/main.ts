import { ApiClient } from './api';
import { App } from './app';

const root = document.getElementById('app');
if (!root) {
    throw new Error("missing #app mount point");
}

// The service origin may differ from the page origin; data-api overrides.
const api = new ApiClient(root.dataset.api ?? '');
void new App(root, api).start();
