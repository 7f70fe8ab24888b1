import type { CreateSessionBody, SessionView } from "./types";

export class ApiError extends Error {
  constructor(readonly status: number, readonly detail: unknown) {
    super(typeof detail === "string" ? detail : JSON.stringify(detail));
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(path, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  if (!response.ok) {
    let detail: unknown = response.statusText;
    try {
      detail = (await response.json()).detail ?? detail;
    } catch {
      /* non-JSON error body */
    }
    throw new ApiError(response.status, detail);
  }
  if (response.status === 204) {
    return undefined as T;
  }
  return (await response.json()) as T;
}

export const api = {
  createSession(body: CreateSessionBody): Promise<SessionView> {
    return request("/api/sessions", { method: "POST", body: JSON.stringify(body) });
  },
  getState(id: string): Promise<SessionView> {
    return request(`/api/sessions/${id}`);
  },
  postAnswer(id: string, answer: "yes" | "no"): Promise<SessionView> {
    return request(`/api/sessions/${id}/answer`, {
      method: "POST",
      body: JSON.stringify({ answer }),
    });
  },
};
