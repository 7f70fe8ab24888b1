import { api, ApiError } from "./api";
import { diagnosisLabel, escapeHtml, formatPercent, renderBars, renderHistory,
         renderKbText, renderQueryCard, sortDiagnoses } from "./format";
import type { SessionView } from "./types";

const SAMPLE_KB = `[ontology]
a1: A -> B
a2: A -> ~B

[background]
b1: A
`;

interface AppState {
  view: SessionView | null;
  busy: boolean;
  error: string | null;
}

export class App {
  private state: AppState = { view: null, busy: false, error: null };

  constructor(private root: HTMLElement) {
    this.root.addEventListener("click", (event) => this.onClick(event));
    this.render();
  }

  private onClick(event: Event): void {
    const target = (event.target as HTMLElement).closest("[data-action]");
    if (!target || this.state.busy) {
      return;
    }
    const action = target.getAttribute("data-action");
    if (action === "start") {
      void this.startSession();
    } else if (action === "answer-yes") {
      void this.answer("yes");
    } else if (action === "answer-no") {
      void this.answer("no");
    } else if (action === "retry") {
      void this.refresh();
    } else if (action === "new-session") {
      this.state = { view: null, busy: false, error: null };
      this.render();
    }
  }

  private input<T extends HTMLElement>(selector: string): T {
    return this.root.querySelector(selector) as T;
  }

  private async startSession(): Promise<void> {
    const kbText = this.input<HTMLTextAreaElement>("#kb-text").value;
    const strategy = this.input<HTMLSelectElement>("#strategy").value;
    const sigma = Number(this.input<HTMLInputElement>("#sigma").value);
    await this.call(() => api.createSession({ kb_text: kbText, strategy, sigma, seed: 0 }));
  }

  private async answer(value: "yes" | "no"): Promise<void> {
    const view = this.state.view;
    if (!view) {
      return;
    }
    await this.call(() => api.postAnswer(view.id, value));
  }

  private async refresh(): Promise<void> {
    const view = this.state.view;
    if (!view) {
      this.state.error = null;
      this.render();
      return;
    }
    await this.call(() => api.getState(view.id));
  }

  private async call(operation: () => Promise<SessionView>): Promise<void> {
    this.state.busy = true;
    this.state.error = null;
    this.render();
    try {
      this.state.view = await operation();
    } catch (error) {
      if (error instanceof ApiError && error.status === 409 && this.state.view) {
        // someone answered first: fall back to the current server state
        try {
          this.state.view = await api.getState(this.state.view.id);
        } catch (inner) {
          this.state.error = describe(inner);
        }
      } else {
        this.state.error = describe(error);
      }
    } finally {
      this.state.busy = false;
      this.render();
    }
  }

  private render(): void {
    const { view, busy, error } = this.state;
    const banner = error
      ? `<div class="error-banner">${escapeHtml(error)} ` +
        `<button data-action="retry">retry</button></div>`
      : "";
    if (!view) {
      this.root.innerHTML = banner + renderSetup(busy);
      return;
    }
    this.root.innerHTML = banner + renderSession(view, busy);
  }
}

function describe(error: unknown): string {
  if (error instanceof ApiError) {
    return `request failed (${error.status}): ${error.message}`;
  }
  return `service unreachable: ${error instanceof Error ? error.message : String(error)}`;
}

function renderSetup(busy: boolean): string {
  return `
    <section class="setup">
      <h2>start a debugging session</h2>
      <textarea id="kb-text" rows="10" spellcheck="false">${escapeHtml(SAMPLE_KB)}</textarea>
      <div class="controls">
        <label>strategy
          <select id="strategy">
            <option value="entropy">entropy</option>
            <option value="split">split</option>
            <option value="random">random</option>
          </select>
        </label>
        <label>stop threshold
          <input id="sigma" type="number" min="0.5" max="1" step="0.01" value="0.95">
        </label>
        <button data-action="start" ${busy ? "disabled" : ""}>Start session</button>
      </div>
    </section>`;
}

function renderSession(view: SessionView, busy: boolean): string {
  const parts: string[] = [`<section class="session">`];
  parts.push(`<p class="status">status: <strong>${view.status}</strong></p>`);

  if (view.status === "AWAITING_ANSWER" && view.current_query) {
    parts.push(renderQueryCard(view.current_query.sentences, busy));
  } else if (view.status === "FINISHED") {
    const top = sortDiagnoses(view.diagnoses)[0];
    if (!top) {
      parts.push(`<div class="verdict ok"><h2>no fault found</h2>` +
        `<p>the knowledge base already satisfies every requirement</p></div>`);
    } else {
      parts.push(`<div class="verdict"><h2>diagnosis ${escapeHtml(
        diagnosisLabel(top.axiom_ids))}</h2>` +
        `<p>probability ${formatPercent(top.probability)} after ` +
        `${view.history.length} answer(s); faulty axioms highlighted below</p></div>`);
    }
  } else {
    parts.push(`<div class="verdict"><h2>no discriminating query left</h2>` +
      `<p>remaining candidates are ranked below</p></div>`);
  }

  parts.push(`<h3>diagnosis probabilities</h3>`);
  parts.push(`<div class="bars">${renderBars(view.diagnoses, view.sigma)}</div>`);
  parts.push(renderHistory(view.history));

  const highlight = view.status === "FINISHED"
    ? (sortDiagnoses(view.diagnoses)[0]?.axiom_ids ?? [])
    : [];
  parts.push(`<h3>knowledge base</h3>` +
    `<pre class="kb-text">${renderKbText(view.kb_text, highlight)}</pre>`);
  parts.push(`<button data-action="new-session" ${busy ? "disabled" : ""}>` +
    `New session</button>`);
  parts.push(`</section>`);
  return parts.join("\n");
}
