/** Wire types mirroring the play-service JSON API.
 *
 * The server is authoritative for every rule; the client renders these views
 * verbatim and never computes legality or outcomes locally.
 */

export type CellState = 'black' | 'white' | 'open';

export type SessionStatus = 'awaiting-white' | 'black-thinking' | 'finished';

export interface LegalWhiteMove {
  actionIndex: number;
  action: string;
  x: number;
  y: number;
  /** every cell the move's effects mention, for the anchor-hover preview */
  footprint: [number, number][];
}

export interface MoveRef {
  side: 'black' | 'white';
  actionIndex: number;
  x: number;
  y: number;
}

export interface SessionView {
  sessionId: string;
  m: number;
  n: number;
  depth: number;
  /** row-major, board[j-1][i-1] is cell (i, j); row y=1 rendered at the top */
  board: CellState[][];
  ply: number;
  status: SessionStatus;
  sideToMove: 'black' | 'white' | null;
  legalWhiteMoves: LegalWhiteMove[];
  verdict: string | null;
  valid: boolean | null;
  outcome: string | null;
  diagnostic: string | null;
  lastMove: MoveRef | null;
}

export interface TranscriptEntry {
  ply: number;
  event: string;
  move: MoveRef | null;
  detail: string;
}

export interface Transcript {
  sessionId: string;
  entries: TranscriptEntry[];
}

export interface CreateSessionRequest {
  model?: string;
  domain?: string;
  problem?: string;
  depth?: number;
  mode?: 'interactive' | 'validation';
}
