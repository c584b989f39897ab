/**
 * Pure HTML renderers for the three screens.
 *
 * Every function takes already-fetched data and returns a markup string;
 * no DOM access, no network. app.ts injects the strings and wires events
 * by element id / data attribute. All dynamic content passes through
 * escapeHtml, including document bodies (via highlightedBodyHtml).
 */

import type {
  ClassCatalog,
  CvReport,
  DatasetStats,
  Health,
  QueueItem,
  ReviewStatus,
  Suggestion,
} from './types.js';
import {
  escapeHtml,
  fineClassLabel,
  formatDateRange,
  formatMeanStd,
  formatPercent,
  formatScore,
  groupLabel,
  suggestionRuleText,
} from './format.js';
import { highlightedBodyHtml } from './highlight.js';

const QUEUE_TABS: { status: ReviewStatus; label: string }[] = [
  { status: 'pending', label: 'Pending' },
  { status: 'reviewed', label: 'Reviewed' },
  { status: 'discarded', label: 'Discarded' },
];

export function renderNav(active: 'queue' | 'dashboard', pendingCount: number | null): string {
  const badge =
    pendingCount !== null && pendingCount > 0
      ? `<span class="badge">${pendingCount}</span>`
      : '';
  return `
    <a href="#/queue" class="nav-link${active === 'queue' ? ' active' : ''}">Queue ${badge}</a>
    <a href="#/dashboard" class="nav-link${active === 'dashboard' ? ' active' : ''}">Dashboard</a>
  `;
}

export function renderBanner(message: string): string {
  return `
    <div class="banner" role="alert">
      <span>${escapeHtml(message)}</span>
      <button id="banner-retry" class="btn btn-small">Retry</button>
    </div>
  `;
}

export function renderLoading(label: string): string {
  return `<p class="muted loading">${escapeHtml(label)}…</p>`;
}

export function renderNotFound(itemId: string): string {
  return `
    <section class="panel">
      <p class="muted">No queue item <code>${escapeHtml(itemId)}</code>. It may have been
      reviewed elsewhere.</p>
      <p><a href="#/queue">Back to queue</a></p>
    </section>
  `;
}

// --- queue ----------------------------------------------------------------

function hintChip(hint: string | null): string {
  if (hint === null) return '';
  return `<span class="chip chip-hint" title="Classifier suggestion for the group">robot: ${escapeHtml(groupLabel(hint))}</span>`;
}

function themeChips(themes: string[]): string {
  return themes
    .map((t) => `<span class="chip chip-theme">${escapeHtml(t)}</span>`)
    .join(' ');
}

/**
 * The queue list. Items are rendered in exactly the order the server
 * returned them (oldest publication first); no client-side sorting.
 */
export function renderQueue(items: QueueItem[], status: ReviewStatus): string {
  const tabs = QUEUE_TABS.map(
    (t) =>
      `<button class="tab${t.status === status ? ' active' : ''}" data-queue-status="${t.status}">${t.label}</button>`,
  ).join('');

  const rows =
    items.length === 0
      ? `<p class="muted empty">No ${escapeHtml(status)} items.</p>`
      : items
          .map((item) => {
            const reviewed = item.annotation
              ? `<span class="chip chip-class">${escapeHtml(fineClassLabel(item.annotation.classification))}</span>`
              : '';
            return `
              <article class="queue-row" data-item-id="${escapeHtml(item.item_id)}" tabindex="0">
                <div class="queue-row-head">
                  <span class="doc-date">${escapeHtml(item.doc.date)}</span>
                  <span class="doc-id">${escapeHtml(item.doc.doc_id)}</span>
                  ${hintChip(item.robot_group_hint)}
                  ${reviewed}
                </div>
                <h3 class="doc-title">${escapeHtml(item.doc.title)}</h3>
                <div class="queue-row-themes">${themeChips(item.matched_themes)}</div>
              </article>
            `;
          })
          .join('');

  return `
    <section class="panel">
      <div class="tabs" id="queue-tabs">${tabs}</div>
      <div id="queue-list">${rows}</div>
    </section>
  `;
}

// --- record detail --------------------------------------------------------

function classificationSelect(catalog: ClassCatalog, selected: string): string {
  const groups = catalog.groups
    .map((g) => {
      const options = catalog.fine
        .filter((c) => c.group === g)
        .map(
          (c) =>
            `<option value="${escapeHtml(c.name)}"${c.name === selected ? ' selected' : ''}>${escapeHtml(fineClassLabel(c.name))}</option>`,
        )
        .join('');
      return `<optgroup label="${escapeHtml(groupLabel(g))}">${options}</optgroup>`;
    })
    .join('');
  return `
    <select id="field-classification" name="classification">
      <option value=""${selected === '' ? ' selected' : ''}>— choose —</option>
      ${groups}
    </select>
  `;
}

function annotationForm(catalog: ClassCatalog): string {
  return `
    <form id="annotation-form" autocomplete="off">
      <h3>Annotation</h3>
      <label for="field-action">Action <span class="muted">(what the act does)</span></label>
      <textarea id="field-action" name="action" rows="3"></textarea>
      <label for="field-circumstance">Circumstance <span class="muted">(under which conditions)</span></label>
      <textarea id="field-circumstance" name="circumstance" rows="3"></textarea>
      <label for="field-classification">Classification</label>
      <div class="classification-row">
        ${classificationSelect(catalog, '')}
        <span id="group-chip" class="chip chip-group hidden"></span>
      </div>
      <div id="form-error" class="form-error hidden" role="alert"></div>
      <div class="form-actions">
        <button type="submit" id="submit-review" class="btn btn-primary" disabled>Save review</button>
        <button type="button" id="discard-item" class="btn btn-danger">Discard</button>
      </div>
    </form>
  `;
}

function savedAnnotation(item: QueueItem): string {
  if (!item.annotation) {
    return `<p class="muted">Discarded${item.reviewed_at ? ` at ${escapeHtml(item.reviewed_at)}` : ''}.</p>`;
  }
  const a = item.annotation;
  return `
    <div class="saved-annotation">
      <h3>Saved annotation</h3>
      <dl>
        <dt>Action</dt><dd>${escapeHtml(a.action)}</dd>
        <dt>Circumstance</dt><dd>${escapeHtml(a.circumstance)}</dd>
        <dt>Classification</dt>
        <dd><span class="chip chip-class">${escapeHtml(fineClassLabel(a.classification))}</span></dd>
      </dl>
      ${item.reviewed_at ? `<p class="muted">Reviewed at ${escapeHtml(item.reviewed_at)}</p>` : ''}
    </div>
  `;
}

export function renderDetail(item: QueueItem, catalog: ClassCatalog): string {
  const organ = item.doc.organ
    ? `<span class="doc-organ">${escapeHtml(item.doc.organ)}</span>`
    : '';
  return `
    <section class="panel detail">
      <p><a href="#/queue">← Queue</a></p>
      <header class="detail-head">
        <span class="doc-date">${escapeHtml(item.doc.date)}</span>
        <span class="doc-id">${escapeHtml(item.doc.doc_id)}</span>
        ${organ}
        ${hintChip(item.robot_group_hint)}
      </header>
      <h2 class="doc-title">${escapeHtml(item.doc.title)}</h2>
      <div class="queue-row-themes">${themeChips(item.matched_themes)}</div>
      <div class="doc-body">${highlightedBodyHtml(item.doc.body, item.highlights)}</div>
      ${item.status === 'pending' ? annotationForm(catalog) : savedAnnotation(item)}
    </section>
  `;
}

// --- dashboard ------------------------------------------------------------

export interface DashboardModel {
  /** null while loading or when no records exist yet. */
  stats: DatasetStats | null;
  /** Friendly reason why stats are absent (e.g. nothing reviewed yet). */
  statsNotice: string | null;
  /** Result of the last evaluation run this session; the server does not store reports. */
  report: CvReport | null;
  evaluateNotice: string | null;
  suggestions: Suggestion[] | null;
  suggestionsNotice: string | null;
  health: Health | null;
  /** True when the last refresh failed and cached data is shown. */
  stale: boolean;
  exportUrl: string;
}

function staleBadge(stale: boolean): string {
  return stale ? '<span class="badge badge-stale" title="Last refresh failed; showing cached data">stale</span>' : '';
}

function statsSection(model: DashboardModel): string {
  const { stats } = model;
  if (stats === null) {
    const reason = model.statsNotice ?? 'Loading…';
    return `<p class="muted">${escapeHtml(reason)}</p>`;
  }
  const bars = Object.entries(stats.group_proportions)
    .map(([group, share]) => {
      const width = Math.round(share * 1000) / 10;
      return `
        <div class="bar-row">
          <span class="bar-label">${escapeHtml(groupLabel(group))}</span>
          <div class="bar-track"><div class="bar-fill group-${escapeHtml(group)}" style="width: ${width}%"></div></div>
          <span class="bar-value">${formatPercent(share)}</span>
        </div>
      `;
    })
    .join('');
  return `
    <div class="stat-cards">
      <div class="stat-card"><span class="stat-value">${stats.n_records}</span><span class="stat-label">records</span></div>
      <div class="stat-card"><span class="stat-value">${escapeHtml(formatDateRange(stats.date_min, stats.date_max))}</span><span class="stat-label">date range</span></div>
      <div class="stat-card"><span class="stat-value">${formatMeanStd(stats.action_words_mean, stats.action_words_std)}</span><span class="stat-label">action words</span></div>
      <div class="stat-card"><span class="stat-value">${formatMeanStd(stats.circumstance_words_mean, stats.circumstance_words_std)}</span><span class="stat-label">circumstance words</span></div>
    </div>
    <div class="bar-chart" aria-label="Share of records per group">${bars}</div>
  `;
}

function evaluationSection(model: DashboardModel): string {
  const notice = model.evaluateNotice
    ? `<p class="notice">${escapeHtml(model.evaluateNotice)}</p>`
    : '';
  if (model.report === null) {
    return `
      ${notice}
      <p class="muted">No evaluation has been run yet.</p>
      <button id="run-eval" class="btn">Run cross-validation</button>
    `;
  }
  const r = model.report;
  const rows = r.folds
    .map(
      (f) =>
        `<tr><td>${f.fold}</td><td>${formatScore(f.mcc)}</td><td>${formatScore(f.acc)}</td><td>${formatScore(f.weighted_f1)}</td></tr>`,
    )
    .join('');
  const mean = `<tr class="report-mean"><td>mean</td>
    <td>${formatMeanStd(r.mean.mcc ?? 0, r.std.mcc ?? 0)}</td>
    <td>${formatMeanStd(r.mean.acc ?? 0, r.std.acc ?? 0)}</td>
    <td>${formatMeanStd(r.mean.weighted_f1 ?? 0, r.std.weighted_f1 ?? 0)}</td></tr>`;
  return `
    ${notice}
    <p class="muted">${escapeHtml(r.model)} · k=${r.k} · seed=${r.seed}</p>
    <table class="report-table">
      <thead><tr><th>Fold</th><th>MCC</th><th>Accuracy</th><th>Weighted F1</th></tr></thead>
      <tbody>${rows}${mean}</tbody>
    </table>
    <button id="run-eval" class="btn">Run again</button>
  `;
}

function suggestionsSection(model: DashboardModel): string {
  if (model.suggestionsNotice !== null) {
    return `<p class="muted">${escapeHtml(model.suggestionsNotice)}</p>`;
  }
  if (model.suggestions === null) {
    return `<p class="muted">Loading…</p>`;
  }
  if (model.suggestions.length === 0) {
    return `<p class="muted">No rule refinements to suggest.</p>`;
  }
  const rows = model.suggestions
    .map((s) => {
      const ruleText = suggestionRuleText(s.direction, s.candidate_token);
      return `
        <li class="suggestion">
          <span class="chip chip-theme">${escapeHtml(s.theme_name)}</span>
          <code>${escapeHtml(ruleText)}</code>
          <span class="muted">score ${formatScore(s.score)} · ${s.evidence_count} review${s.evidence_count === 1 ? '' : 's'}</span>
          <button class="btn btn-small copy-btn" data-copy-text="${escapeHtml(ruleText)}">Copy</button>
        </li>
      `;
    })
    .join('');
  return `
    <p class="muted">Copy a line into the matching theme block of your rules file;
    the UI never edits rules itself.</p>
    <ul class="suggestion-list">${rows}</ul>
  `;
}

function healthSection(health: Health | null): string {
  if (health === null) return '';
  const q = health.queue;
  return `
    <p class="muted health-line">
      ${health.documents} documents ·
      queue ${q.pending} pending / ${q.reviewed} reviewed / ${q.discarded} discarded ·
      ${health.themes.length} themes ·
      rules ${escapeHtml(health.rules_version.slice(0, 8))} ·
      model ${health.model_loaded ? 'trained' : 'not trained'}
    </p>
  `;
}

export function renderDashboard(model: DashboardModel): string {
  return `
    <section class="panel">
      <h2>Dataset ${staleBadge(model.stale)}</h2>
      ${statsSection(model)}
      <p><a href="${escapeHtml(model.exportUrl)}" download>Download gat.csv</a>
      · <button id="train-model" class="btn btn-small">Train classifier</button></p>
    </section>
    <section class="panel">
      <h2>Cross-validation ${staleBadge(model.stale)}</h2>
      ${evaluationSection(model)}
    </section>
    <section class="panel">
      <h2>Rule suggestions ${staleBadge(model.stale)}</h2>
      ${suggestionsSection(model)}
    </section>
    <section class="panel">
      <h2>Service</h2>
      ${healthSection(model.health)}
    </section>
  `;
}
