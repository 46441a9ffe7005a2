import { ApiClient } from './api.js';
import { render } from './render.js';
import { ViewModel } from './viewmodel.js';

declare global {
  interface Window {
    CMOKB_BASE_URL?: string;
  }
}

const baseUrl = window.CMOKB_BASE_URL ?? 'http://127.0.0.1:8765';
const root = document.getElementById('app');
if (!root) {
  throw new Error('missing #app element');
}

const vm = new ViewModel(new ApiClient(baseUrl));
vm.subscribe((state) => render(root, vm, state));
void vm.init();
