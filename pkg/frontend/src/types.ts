export type SessionStatus = "AWAITING_ANSWER" | "FINISHED" | "NO_DISCRIMINATING_QUERY";

export interface DiagnosisView {
  axiom_ids: string[];
  probability: number;
}

export interface QueryView {
  sentences: string[];
}

export interface HistoryItem {
  sentences: string[];
  answer: "yes" | "no";
}

export interface SessionView {
  id: string;
  created_at: string;
  status: SessionStatus;
  sigma: number;
  n_leading: number;
  strategy: { kind: string; seed: number | null };
  diagnoses: DiagnosisView[];
  current_query: QueryView | null;
  history: HistoryItem[];
  kb_text: string;
}

export interface CreateSessionBody {
  kb_text: string;
  strategy: string;
  seed?: number;
  sigma?: number;
  n_leading?: number;
}
