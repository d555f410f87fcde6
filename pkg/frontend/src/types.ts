/** Payload types for the game service HTTP/JSON API. */

export interface CellView {
  terrain: number;
  structure: number;
  owner: number;
  town: boolean;
}

export interface BridgeView {
  owner: number;
  from: [number, number];
  to: [number, number];
}

export interface PlayerView {
  seat: number;
  faction: string;
  workers: number;
  coins: number;
  priests: number;
  power: [number, number, number];
  vp: number;
  shipping: number;
  dig_level: number;
  cults: [number, number, number, number];
  buildings: number[];
  bonus_card: number | null;
  favors: number[];
  towns: number[];
  bridges_built: number;
  passed: boolean;
}

export interface StateView {
  board: CellView[][];
  bridges: BridgeView[];
  round: number;
  phase: "SETUP" | "ACTIONS" | "END";
  to_move: number;
  start_player: number;
  players: PlayerView[];
  scoring_tiles: number[];
  scoring_tile_names: string[];
  bonus_in_play: number[];
  bonus_card_names: string[];
  bonus_coins: number[];
  favor_supply: number[];
  favor_names: string[];
  town_supply: number[];
  town_tile_names: string[];
  power_actions_used: boolean[];
  pending_town: number;
  ply: number;
  is_terminal: boolean;
  scores?: [number, number];
}

export interface LegalEntry {
  index: number;
  description: string;
}

export interface PolicyEntry {
  index: number;
  prob: number;
  description: string;
}

export interface AgentMove {
  index: number;
  description: string;
  v_root: number;
  policy: PolicyEntry[];
  simulations: number;
  ply: number;
}

export interface GameResponse {
  id: string;
  human_seat: number;
  agent: string;
  state: StateView;
}

export interface ActionResponse {
  id: string;
  applied: number;
  description: string;
  state: StateView;
}

export interface AgentMoveResponse {
  id: string;
  move: AgentMove;
  state: StateView;
}

export interface LegalResponse {
  id: string;
  to_move: number;
  actions: LegalEntry[];
}

export interface SessionRecord {
  session_id: string;
  config: Record<string, unknown>;
  actions: number[];
  human_seat: number;
  agent: string;
  agent_moves: AgentMove[];
  complete: boolean;
  scores: [number, number] | null;
  game_record: string;
}
