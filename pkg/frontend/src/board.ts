import type { LegalWhiteMove, SessionView } from './types.js';

/** One renderable cell; coordinates are 1-based, row y=1 at the top. */
export interface CellView {
  x: number;
  y: number;
  state: 'black' | 'white' | 'open';
  /** legal anchor of the currently selected action */
  anchor: boolean;
  /** inside the footprint preview of the hovered anchor */
  preview: boolean;
  /** part of the last played move's effects */
  lastMove: boolean;
}

export interface BoardViewModel {
  rows: CellView[][]; // rows[0] is y=1
  banner: string;
  actions: { name: string; anchors: number }[];
  finished: boolean;
}

/** Anchors of one named action among the legal white moves. */
export function anchorsOf(view: SessionView, action: string): LegalWhiteMove[] {
  return view.legalWhiteMoves.filter((mv) => mv.action === action);
}

export function actionNames(view: SessionView): string[] {
  const names: string[] = [];
  for (const mv of view.legalWhiteMoves) {
    if (!names.includes(mv.action)) {
      names.push(mv.action);
    }
  }
  return names;
}

export function bannerText(view: SessionView): string {
  if (view.status === 'finished') {
    const headline = view.valid ? 'Black wins' : 'Strategy failed';
    return `${headline} - ${view.outcome ?? view.verdict ?? 'finished'}`;
  }
  if (view.status === 'awaiting-white') {
    return `Ply ${view.ply}/${view.depth} - your move (White)`;
  }
  return `Ply ${view.ply}/${view.depth} - Black is thinking`;
}

function lastMoveCells(view: SessionView): Set<string> {
  // highlight only the anchor cell; footprints of the opponent's reply are
  // recovered from the board diff by the server-provided lastMove anchor
  const cells = new Set<string>();
  if (view.lastMove) {
    cells.add(`${view.lastMove.x},${view.lastMove.y}`);
  }
  return cells;
}

/** Pure view-model: everything the DOM layer needs, nothing it computes. */
export function buildViewModel(
  view: SessionView,
  selectedAction: string | null,
  hoveredAnchor: { x: number; y: number } | null,
): BoardViewModel {
  const anchors = new Set<string>();
  const preview = new Set<string>();
  if (selectedAction !== null) {
    for (const mv of anchorsOf(view, selectedAction)) {
      anchors.add(`${mv.x},${mv.y}`);
      if (hoveredAnchor && mv.x === hoveredAnchor.x && mv.y === hoveredAnchor.y) {
        for (const [fx, fy] of mv.footprint) {
          preview.add(`${fx},${fy}`);
        }
      }
    }
  }
  const last = lastMoveCells(view);
  const rows: CellView[][] = [];
  for (let y = 1; y <= view.n; y++) {
    const row: CellView[] = [];
    for (let x = 1; x <= view.m; x++) {
      const key = `${x},${y}`;
      row.push({
        x,
        y,
        state: view.board[y - 1][x - 1],
        anchor: anchors.has(key),
        preview: preview.has(key),
        lastMove: last.has(key),
      });
    }
    rows.push(row);
  }
  const actions = actionNames(view).map((name) => ({
    name,
    anchors: anchorsOf(view, name).length,
  }));
  return { rows, banner: bannerText(view), actions, finished: view.status === 'finished' };
}

/** Text snapshot of the board for diffing against the server's matrix. */
export function boardSnapshot(view: SessionView): string {
  return view.board
    .map((row) => row.map((c) => ({ black: 'B', white: 'W', open: '.' }[c])).join(' '))
    .join('\n');
}
