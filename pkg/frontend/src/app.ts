/**
 * DOM wiring: hash routing, polling, and event handling.
 *
 * The app keeps no authoritative state. Everything on screen is refetched
 * from the API on reload; the only session-local values are the last
 * cross-validation report (the server does not store reports) and text
 * the reviewer is currently typing. Background refreshes never re-render
 * the detail screen, so a poll can never wipe a half-written annotation.
 */

import { ApiClient, ApiError } from './api.js';
import type { ClassCatalog, QueueItem, ReviewStatus } from './types.js';
import { groupLabel } from './format.js';
import { groupOfFineClass, toAnnotation, validateAnnotation, type FormState } from './form.js';
import {
  renderBanner,
  renderDashboard,
  renderDetail,
  renderLoading,
  renderNav,
  renderNotFound,
  renderQueue,
  type DashboardModel,
} from './render.js';

const POLL_INTERVAL_MS = 30_000;

type Route =
  | { screen: 'queue' }
  | { screen: 'detail'; itemId: string }
  | { screen: 'dashboard' };

export function parseRoute(hash: string): Route {
  const parts = hash.replace(/^#\/?/, '').split('/');
  if (parts[0] === 'dashboard') return { screen: 'dashboard' };
  if (parts[0] === 'item' && parts[1]) {
    return { screen: 'detail', itemId: decodeURIComponent(parts[1]) };
  }
  return { screen: 'queue' };
}

export class App {
  private readonly api: ApiClient;
  private readonly nav: HTMLElement;
  private readonly bannerHost: HTMLElement;
  private readonly view: HTMLElement;

  private catalog: ClassCatalog | null = null;
  private queueStatus: ReviewStatus = 'pending';
  private pendingCount: number | null = null;
  private route: Route = { screen: 'queue' };
  private dashboard: DashboardModel;

  constructor(api: ApiClient, doc: Document) {
    this.api = api;
    this.nav = this.mustFind(doc, '#nav');
    this.bannerHost = this.mustFind(doc, '#banner');
    this.view = this.mustFind(doc, '#view');
    this.dashboard = {
      stats: null,
      statsNotice: null,
      report: null,
      evaluateNotice: null,
      suggestions: null,
      suggestionsNotice: null,
      health: null,
      stale: false,
      exportUrl: api.exportUrl(),
    };
  }

  private mustFind(doc: Document, selector: string): HTMLElement {
    const el = doc.querySelector<HTMLElement>(selector);
    if (!el) throw new Error(`missing element ${selector}`);
    return el;
  }

  start(): void {
    window.addEventListener('hashchange', () => void this.navigate());
    this.view.addEventListener('click', (ev) => this.onViewClick(ev));
    this.view.addEventListener('keydown', (ev) => this.onViewKeydown(ev));
    this.bannerHost.addEventListener('click', (ev) => {
      if ((ev.target as HTMLElement).id === 'banner-retry') void this.refresh();
    });
    window.setInterval(() => void this.refresh(), POLL_INTERVAL_MS);
    void this.navigate();
  }

  // --- routing ------------------------------------------------------------

  private async navigate(): Promise<void> {
    this.route = parseRoute(window.location.hash);
    this.renderNavBar();
    if (this.route.screen === 'queue') await this.showQueue();
    else if (this.route.screen === 'detail') await this.showDetail(this.route.itemId);
    else await this.showDashboard();
  }

  /** Periodic refresh; leaves the detail form untouched. */
  private async refresh(): Promise<void> {
    if (this.route.screen === 'queue') await this.showQueue();
    else if (this.route.screen === 'dashboard') await this.showDashboard();
    else await this.checkConnection();
  }

  private renderNavBar(): void {
    this.nav.innerHTML = renderNav(
      this.route.screen === 'dashboard' ? 'dashboard' : 'queue',
      this.pendingCount,
    );
  }

  private setOffline(offline: boolean): void {
    this.bannerHost.innerHTML = offline
      ? renderBanner('Cannot reach the server. Shown data may be stale; nothing you typed is lost.')
      : '';
  }

  private async checkConnection(): Promise<void> {
    try {
      const health = await this.api.fetchHealth();
      this.pendingCount = health.queue.pending;
      this.setOffline(false);
      this.renderNavBar();
    } catch (err) {
      if (err instanceof ApiError && err.isNetwork) this.setOffline(true);
    }
  }

  // --- queue screen -------------------------------------------------------

  private async showQueue(): Promise<void> {
    try {
      const items = await this.api.fetchQueue(this.queueStatus);
      if (this.queueStatus === 'pending') this.pendingCount = items.length;
      this.setOffline(false);
      this.renderNavBar();
      if (this.route.screen !== 'queue') return; // user navigated away mid-fetch
      this.view.innerHTML = renderQueue(items, this.queueStatus);
    } catch (err) {
      this.handleFetchError(err);
    }
  }

  private onViewClick(ev: Event): void {
    const target = ev.target as HTMLElement;
    const row = target.closest<HTMLElement>('[data-item-id]');
    if (row?.dataset.itemId) {
      window.location.hash = `#/item/${encodeURIComponent(row.dataset.itemId)}`;
      return;
    }
    const tab = target.closest<HTMLElement>('[data-queue-status]');
    if (tab?.dataset.queueStatus) {
      this.queueStatus = tab.dataset.queueStatus as ReviewStatus;
      void this.showQueue();
      return;
    }
    if (target.closest('#run-eval')) void this.runEvaluation();
    else if (target.closest('#train-model')) void this.trainModel();
    else {
      const copy = target.closest<HTMLElement>('.copy-btn');
      if (copy?.dataset.copyText !== undefined) void this.copyText(copy);
    }
  }

  private onViewKeydown(ev: KeyboardEvent): void {
    if (ev.key !== 'Enter') return;
    const row = (ev.target as HTMLElement).closest<HTMLElement>('[data-item-id]');
    if (row?.dataset.itemId) {
      window.location.hash = `#/item/${encodeURIComponent(row.dataset.itemId)}`;
    }
  }

  // --- detail screen ------------------------------------------------------

  private async showDetail(itemId: string): Promise<void> {
    this.view.innerHTML = renderLoading('Loading document');
    try {
      if (this.catalog === null) this.catalog = await this.api.fetchClasses();
      const item = await this.api.fetchItem(itemId);
      this.setOffline(false);
      if (this.route.screen !== 'detail' || this.route.itemId !== itemId) return;
      this.view.innerHTML = renderDetail(item, this.catalog);
      if (item.status === 'pending') this.wireForm(item);
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        this.view.innerHTML = renderNotFound(itemId);
        return;
      }
      this.handleFetchError(err);
    }
  }

  private formElements() {
    const form = this.view.querySelector<HTMLFormElement>('#annotation-form');
    if (!form) return null;
    return {
      form,
      action: form.querySelector<HTMLTextAreaElement>('#field-action')!,
      circumstance: form.querySelector<HTMLTextAreaElement>('#field-circumstance')!,
      classification: form.querySelector<HTMLSelectElement>('#field-classification')!,
      groupChip: form.querySelector<HTMLElement>('#group-chip')!,
      error: form.querySelector<HTMLElement>('#form-error')!,
      submit: form.querySelector<HTMLButtonElement>('#submit-review')!,
      discard: form.querySelector<HTMLButtonElement>('#discard-item')!,
    };
  }

  private readForm(): FormState {
    const els = this.formElements();
    if (!els) return { action: '', circumstance: '', classification: '' };
    return {
      action: els.action.value,
      circumstance: els.circumstance.value,
      classification: els.classification.value,
    };
  }

  private wireForm(item: QueueItem): void {
    const els = this.formElements();
    if (!els || this.catalog === null) return;
    const catalog = this.catalog;

    const sync = () => {
      const state = this.readForm();
      els.submit.disabled = !validateAnnotation(state, catalog).ok;
      const group =
        state.classification === '' ? null : groupOfFineClass(catalog, state.classification);
      els.groupChip.classList.toggle('hidden', group === null);
      if (group !== null) {
        els.groupChip.textContent = `Group: ${groupLabel(group)}`;
        els.groupChip.dataset.group = group;
      }
    };
    els.form.addEventListener('input', sync);
    els.form.addEventListener('change', sync);
    els.form.addEventListener('submit', (ev) => {
      ev.preventDefault();
      void this.submitReview(item.item_id);
    });
    els.discard.addEventListener('click', () => {
      if (window.confirm('Discard this document without creating a record?')) {
        void this.discardItem(item.item_id);
      }
    });
    sync();
  }

  private showFormError(message: string): void {
    const els = this.formElements();
    if (!els) return;
    els.error.textContent = message;
    els.error.classList.remove('hidden');
  }

  private async submitReview(itemId: string): Promise<void> {
    const els = this.formElements();
    if (!els) return;
    els.submit.disabled = true;
    try {
      await this.api.submitReview(itemId, toAnnotation(this.readForm()));
      window.location.hash = '#/queue';
    } catch (err) {
      els.submit.disabled = false;
      if (err instanceof ApiError && err.isNetwork) {
        this.setOffline(true);
        this.showFormError('Could not reach the server; your annotation is still here. Retry when the connection is back.');
      } else if (err instanceof ApiError) {
        this.showFormError(`${err.message} (${err.code})`);
      } else {
        this.showFormError(String(err));
      }
    }
  }

  private async discardItem(itemId: string): Promise<void> {
    try {
      await this.api.discardItem(itemId);
      window.location.hash = '#/queue';
    } catch (err) {
      if (err instanceof ApiError && err.isNetwork) this.setOffline(true);
      this.showFormError(err instanceof ApiError ? `${err.message} (${err.code})` : String(err));
    }
  }

  // --- dashboard screen ---------------------------------------------------

  private async showDashboard(): Promise<void> {
    const d = this.dashboard;
    let sawNetwork = false;
    try {
      d.stats = await this.api.fetchStats();
      d.statsNotice = null;
    } catch (err) {
      if (err instanceof ApiError && err.isNetwork) sawNetwork = true;
      else if (err instanceof ApiError) {
        d.stats = null;
        d.statsNotice = 'No records yet — review a few documents first.';
      }
    }
    try {
      d.suggestions = await this.api.fetchSuggestions();
      d.suggestionsNotice = null;
    } catch (err) {
      if (err instanceof ApiError && err.isNetwork) sawNetwork = true;
      else if (err instanceof ApiError) {
        d.suggestions = null;
        d.suggestionsNotice = err.message;
      }
    }
    try {
      d.health = await this.api.fetchHealth();
      this.pendingCount = d.health.queue.pending;
    } catch (err) {
      if (err instanceof ApiError && err.isNetwork) sawNetwork = true;
    }
    d.stale = sawNetwork;
    this.setOffline(sawNetwork);
    this.renderNavBar();
    if (this.route.screen !== 'dashboard') return;
    this.view.innerHTML = renderDashboard(d);
  }

  private async runEvaluation(): Promise<void> {
    const d = this.dashboard;
    d.evaluateNotice = 'Running cross-validation…';
    this.view.innerHTML = renderDashboard(d);
    try {
      d.report = await this.api.runEvaluation();
      d.evaluateNotice = null;
    } catch (err) {
      if (err instanceof ApiError && err.isNetwork) this.setOffline(true);
      d.evaluateNotice = err instanceof ApiError ? err.message : String(err);
    }
    if (this.route.screen === 'dashboard') this.view.innerHTML = renderDashboard(d);
  }

  private async trainModel(): Promise<void> {
    const d = this.dashboard;
    try {
      const result = await this.api.trainModel();
      d.evaluateNotice = `Trained ${result.model} on ${result.n_records} records (vocabulary ${result.vocab_size}).`;
    } catch (err) {
      if (err instanceof ApiError && err.isNetwork) this.setOffline(true);
      d.evaluateNotice = err instanceof ApiError ? err.message : String(err);
    }
    await this.showDashboard();
  }

  private async copyText(button: HTMLElement): Promise<void> {
    const text = button.dataset.copyText ?? '';
    try {
      await navigator.clipboard.writeText(text);
      const original = button.textContent;
      button.textContent = 'Copied';
      window.setTimeout(() => {
        button.textContent = original;
      }, 1200);
    } catch {
      window.prompt('Copy this rule line:', text);
    }
  }

  // --- errors -------------------------------------------------------------

  private handleFetchError(err: unknown): void {
    if (err instanceof ApiError && err.isNetwork) {
      this.setOffline(true);
      return; // keep whatever is on screen
    }
    const message = err instanceof ApiError ? `${err.message} (${err.code})` : String(err);
    this.view.innerHTML = `<section class="panel"><p class="form-error">${message
      .replace(/&/g, '&amp;')
      .replace(/</g, '&lt;')}</p></section>`;
  }
}
