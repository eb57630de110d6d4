import { ApiClient, ApiError } from './api.js';
import { buildViewModel } from './board.js';
import type { SessionView } from './types.js';

/** DOM wiring. All state lives on the server; this file only renders the last
 * fetched view and forwards clicks. Optimistic updates are deliberately
 * absent: every action awaits the server's next view. */

const client = new ApiClient('');

interface UiState {
  view: SessionView | null;
  selectedAction: string | null;
  hovered: { x: number; y: number } | null;
  message: string;
}

const state: UiState = { view: null, selectedAction: null, hovered: null, message: '' };

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

async function loadModels(): Promise<void> {
  const { models } = await client.listModels();
  const select = el<HTMLSelectElement>('model');
  select.innerHTML = '';
  for (const name of models) {
    const option = document.createElement('option');
    option.value = name;
    option.textContent = name;
    select.appendChild(option);
  }
  select.value = models.includes('tic-5x4') ? 'tic-5x4' : models[0];
}

async function startSession(): Promise<void> {
  const model = el<HTMLSelectElement>('model').value;
  const mode = el<HTMLSelectElement>('mode').value as 'interactive' | 'validation';
  state.message = '';
  try {
    state.view = await client.createSession({ model, mode });
    state.selectedAction = null;
    state.hovered = null;
  } catch (err) {
    state.view = null;
    state.message = err instanceof ApiError ? err.detail : String(err);
  }
  render();
}

async function clickCell(x: number, y: number): Promise<void> {
  if (!state.view || state.view.status !== 'awaiting-white' || !state.selectedAction) {
    return;
  }
  try {
    state.view = await client.submitMove(state.view.sessionId, state.selectedAction, x, y);
    state.message = state.view.diagnostic ?? '';
  } catch (err) {
    state.message = err instanceof ApiError ? err.detail : String(err);
  }
  render();
}

function render(): void {
  const board = el<HTMLDivElement>('board');
  const banner = el<HTMLDivElement>('banner');
  const actions = el<HTMLDivElement>('actions');
  const message = el<HTMLDivElement>('message');
  message.textContent = state.message;
  board.innerHTML = '';
  actions.innerHTML = '';
  if (!state.view) {
    banner.textContent = 'no session';
    return;
  }
  const vm = buildViewModel(state.view, state.selectedAction, state.hovered);
  banner.textContent = vm.banner;
  banner.className = vm.finished ? 'banner finished' : 'banner';

  for (const action of vm.actions) {
    const button = document.createElement('button');
    button.textContent = `${action.name} (${action.anchors})`;
    button.className = action.name === state.selectedAction ? 'action selected' : 'action';
    button.addEventListener('click', () => {
      state.selectedAction = action.name;
      state.hovered = null;
      render();
    });
    actions.appendChild(button);
  }

  const table = document.createElement('table');
  for (const row of vm.rows) {
    const tr = document.createElement('tr');
    for (const cell of row) {
      const td = document.createElement('td');
      td.textContent = cell.state === 'black' ? '●' : cell.state === 'white' ? '○' : '';
      const classes = ['cell', cell.state];
      if (cell.anchor) classes.push('anchor');
      if (cell.preview) classes.push('preview');
      if (cell.lastMove) classes.push('last');
      td.className = classes.join(' ');
      td.addEventListener('mouseenter', () => {
        state.hovered = { x: cell.x, y: cell.y };
        render();
      });
      td.addEventListener('click', () => void clickCell(cell.x, cell.y));
      tr.appendChild(td);
    }
    table.appendChild(tr);
  }
  board.appendChild(table);
}

export function main(): void {
  el<HTMLButtonElement>('start').addEventListener('click', () => void startSession());
  void loadModels().catch((err) => {
    state.message = `cannot reach the play service: ${err}`;
    render();
  });
  render();
}

if (typeof document !== 'undefined') {
  main();
}
