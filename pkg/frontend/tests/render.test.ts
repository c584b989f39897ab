import { describe, expect, it } from 'vitest';

import { parseRoute } from '../src/app.js';
import {
  renderBanner,
  renderDashboard,
  renderDetail,
  renderNav,
  renderQueue,
  type DashboardModel,
} from '../src/render.js';
import type { ClassCatalog, CvReport, DatasetStats, Health, QueueItem } from '../src/types.js';

// Mirrors GET /api/classes from a live server.
const CATALOG: ClassCatalog = {
  fine: [
    { name: 'Regulation', group: 'Regulation' },
    { name: 'Planning', group: 'Regulation' },
    { name: 'Response', group: 'Regulation' },
    { name: 'Neutral', group: 'Neutral' },
    { name: 'Retreat', group: 'Neutral' },
    { name: 'Legislation', group: 'Neutral' },
    { name: 'Privatization', group: 'Deregulation' },
    { name: 'Deregulation', group: 'Deregulation' },
    { name: 'Flexibilization', group: 'Deregulation' },
    { name: 'InstitutionalReform', group: 'Deregulation' },
    { name: 'LawConsolidation', group: 'Deregulation' },
    { name: 'Revocation', group: 'Deregulation' },
  ],
  groups: ['Regulation', 'Neutral', 'Deregulation'],
};

function makeItem(overrides: Partial<QueueItem> = {}): QueueItem {
  return {
    item_id: 'it-1',
    doc: {
      doc_id: 'd1',
      date: '2020-03-01',
      title: 'Portaria sobre a usina',
      body: 'Autoriza a usina nova.',
      organ: 'MMA',
      source_path: '',
    },
    matched_themes: ['Energy'],
    robot_group_hint: null,
    status: 'pending',
    annotation: null,
    reviewed_at: null,
    highlights: [[11, 16]],
    ...overrides,
  };
}

describe('renderQueue', () => {
  it('renders items in exactly the order the server returned', () => {
    const items = ['d2', 'd1', 'd9'].map((id, i) =>
      makeItem({ item_id: `it-${id}`, doc: { ...makeItem().doc, doc_id: id, title: `T${i}` } }),
    );
    const html = renderQueue(items, 'pending');

    const positions = items.map((it) => html.indexOf(`data-item-id="${it.item_id}"`));
    expect(positions.every((p) => p >= 0)).toBe(true);
    expect([...positions].sort((a, b) => a - b)).toEqual(positions);
  });

  it('marks the active status tab', () => {
    const html = renderQueue([], 'reviewed');
    expect(html).toContain('data-queue-status="reviewed"');
    expect(html).toMatch(/class="tab active" data-queue-status="reviewed"/);
    expect(html).toMatch(/class="tab" data-queue-status="pending"/);
  });

  it('shows an empty state instead of an empty table', () => {
    expect(renderQueue([], 'pending')).toContain('No pending items.');
  });

  it('escapes document titles', () => {
    const item = makeItem({ doc: { ...makeItem().doc, title: '<script>alert(1)</script>' } });
    const html = renderQueue([item], 'pending');
    expect(html).not.toContain('<script>');
    expect(html).toContain('&lt;script&gt;');
  });

  it('shows the robot hint as a Portuguese group chip', () => {
    const html = renderQueue([makeItem({ robot_group_hint: 'Deregulation' })], 'pending');
    expect(html).toContain('robot: Desregulação');
  });

  it('shows the saved classification on reviewed items', () => {
    const html = renderQueue(
      [
        makeItem({
          status: 'reviewed',
          annotation: { action: 'a', circumstance: 'c', classification: 'Flexibilization' },
        }),
      ],
      'reviewed',
    );
    expect(html).toContain('Flexibilização');
  });
});

describe('renderDetail', () => {
  it('highlights the server-provided spans inside the body', () => {
    const html = renderDetail(makeItem(), CATALOG);
    expect(html).toContain('Autoriza a <mark>usina</mark> nova.');
  });

  it('lists matched themes', () => {
    const html = renderDetail(makeItem({ matched_themes: ['Energy', 'Amazon Region'] }), CATALOG);
    expect(html).toContain('Energy');
    expect(html).toContain('Amazon Region');
  });

  it('renders one optgroup per group, labelled in Portuguese', () => {
    const html = renderDetail(makeItem(), CATALOG);
    expect(html.match(/<optgroup/g)).toHaveLength(3);
    expect(html).toContain('<optgroup label="Regulação">');
    expect(html).toContain('<optgroup label="Neutro">');
    expect(html).toContain('<optgroup label="Desregulação">');
  });

  it('offers all twelve classes plus the empty placeholder', () => {
    const html = renderDetail(makeItem(), CATALOG);
    expect(html.match(/<option /g)).toHaveLength(13);
    for (const cls of CATALOG.fine) {
      expect(html).toContain(`value="${cls.name}"`);
    }
  });

  it('places each class under the optgroup the server assigned', () => {
    const html = renderDetail(makeItem(), CATALOG);
    const neutro = html.slice(html.indexOf('label="Neutro"'), html.indexOf('label="Desregulação"'));
    expect(neutro).toContain('value="Retreat"');
    expect(neutro).toContain('value="Legislation"');
    expect(neutro).not.toContain('value="Planning"');
  });

  it('starts with the submit button disabled', () => {
    const html = renderDetail(makeItem(), CATALOG);
    expect(html).toMatch(/id="submit-review"[^>]*disabled/);
  });

  it('shows the saved annotation instead of a form for reviewed items', () => {
    const html = renderDetail(
      makeItem({
        status: 'reviewed',
        annotation: { action: 'Revoga', circumstance: 'sem análise', classification: 'Revocation' },
        reviewed_at: '2026-01-01T00:00:00+00:00',
      }),
      CATALOG,
    );
    expect(html).not.toContain('annotation-form');
    expect(html).toContain('Revoga');
    expect(html).toContain('Revogação');
  });

  it('escapes malicious document bodies', () => {
    const item = makeItem({
      doc: { ...makeItem().doc, body: '<img onerror=x> usina' },
      highlights: [[16, 21]],
    });
    const html = renderDetail(item, CATALOG);
    expect(html).not.toContain('<img');
    expect(html).toContain('&lt;img onerror=x&gt; <mark>usina</mark>');
  });
});

const STATS: DatasetStats = {
  n_records: 1181,
  action_words_mean: 7.05,
  action_words_std: 3.1,
  circumstance_words_mean: 10.22,
  circumstance_words_std: 8.0,
  group_proportions: { Regulation: 0.52, Neutral: 0.185, Deregulation: 0.295 },
  date_min: '2019-01-01',
  date_max: '2020-12-31',
};

function makeDashboard(overrides: Partial<DashboardModel> = {}): DashboardModel {
  return {
    stats: STATS,
    statsNotice: null,
    report: null,
    evaluateNotice: null,
    suggestions: [],
    suggestionsNotice: null,
    health: null,
    stale: false,
    exportUrl: '/api/export/gat.csv',
    ...overrides,
  };
}

describe('renderDashboard', () => {
  it('shows record count, date range, and one bar per group', () => {
    const html = renderDashboard(makeDashboard());
    expect(html).toContain('1181');
    expect(html).toContain('2019-01-01 – 2020-12-31');
    expect(html).toContain('width: 52%');
    expect(html).toContain('width: 18.5%');
    expect(html).toContain('width: 29.5%');
    expect(html).toContain('Regulação');
    expect(html).toContain('52.0%');
  });

  it('shows a placeholder before any evaluation has run', () => {
    const html = renderDashboard(makeDashboard());
    expect(html).toContain('No evaluation has been run yet.');
    expect(html).toContain('id="run-eval"');
    expect(html).not.toContain('report-table');
  });

  it('renders the cross-validation report with one row per fold plus a mean row', () => {
    const report: CvReport = {
      model: 'nb(alpha=1.0, min_df=2)',
      k: 3,
      seed: 17,
      folds: [
        { fold: 0, mcc: 0.5, acc: 0.7, weighted_f1: 0.6 },
        { fold: 1, mcc: 0.4, acc: 0.65, weighted_f1: 0.55 },
        { fold: 2, mcc: 0.45, acc: 0.68, weighted_f1: 0.58 },
      ],
      mean: { mcc: 0.45, acc: 0.6767, weighted_f1: 0.5767 },
      std: { mcc: 0.0408, acc: 0.0205, weighted_f1: 0.0205 },
    };
    const html = renderDashboard(makeDashboard({ report }));
    expect(html.match(/<tr><td>\d+<\/td>/g)).toHaveLength(3);
    expect(html).toContain('0.450 ± 0.041');
    expect(html).toContain('nb(alpha=1.0, min_df=2)');
    expect(html).toContain('k=3');
    expect(html).not.toContain('No evaluation has been run yet.');
  });

  it('puts the pasteable rule line on each suggestion copy button', () => {
    const html = renderDashboard(
      makeDashboard({
        suggestions: [
          {
            theme_name: 'Protected Areas',
            candidate_token: 'garimpo',
            score: 0.693,
            direction: 'add_exclude',
            evidence_count: 2,
          },
        ],
      }),
    );
    expect(html).toContain('data-copy-text="exclude: &quot;garimpo&quot;"');
    expect(html).toContain('Protected Areas');
    expect(html).toContain('0.693');
    expect(html).toContain('2 reviews');
  });

  it('explains an empty suggestion list', () => {
    expect(renderDashboard(makeDashboard({ suggestions: [] }))).toContain(
      'No rule refinements to suggest.',
    );
  });

  it('passes through the server notice when suggestions are unavailable', () => {
    const html = renderDashboard(
      makeDashboard({ suggestions: null, suggestionsNotice: 'not enough reviewed feedback' }),
    );
    expect(html).toContain('not enough reviewed feedback');
  });

  it('flags cached data with a stale badge after a failed refresh', () => {
    expect(renderDashboard(makeDashboard({ stale: true }))).toContain('badge-stale');
    expect(renderDashboard(makeDashboard({ stale: false }))).not.toContain('badge-stale');
  });

  it('shows the friendly notice when no records exist yet', () => {
    const html = renderDashboard(
      makeDashboard({ stats: null, statsNotice: 'No records yet — review a few documents first.' }),
    );
    expect(html).toContain('review a few documents first');
  });

  it('summarizes service health when available', () => {
    const health: Health = {
      status: 'ok',
      documents: 20,
      queue: { pending: 8, reviewed: 12, discarded: 0 },
      records: 12,
      themes: ['Energy', 'Amazon Region'],
      rules_version: 'abcdef012345',
      model_loaded: true,
    };
    const html = renderDashboard(makeDashboard({ health }));
    expect(html).toContain('20 documents');
    expect(html).toContain('8 pending');
    expect(html).toContain('2 themes');
    expect(html).toContain('abcdef01');
    expect(html).toContain('model trained');
  });
});

describe('renderNav and renderBanner', () => {
  it('shows a pending-count badge only when there is work', () => {
    expect(renderNav('queue', 7)).toContain('<span class="badge">7</span>');
    expect(renderNav('queue', 0)).not.toContain('badge');
    expect(renderNav('queue', null)).not.toContain('badge');
  });

  it('marks the active screen', () => {
    expect(renderNav('dashboard', null)).toMatch(/dashboard" class="nav-link active"/);
    expect(renderNav('queue', null)).toMatch(/queue" class="nav-link active"/);
  });

  it('renders the connection banner with a retry control', () => {
    const html = renderBanner('Cannot reach the server.');
    expect(html).toContain('Cannot reach the server.');
    expect(html).toContain('id="banner-retry"');
  });
});

describe('parseRoute', () => {
  it('defaults to the queue', () => {
    expect(parseRoute('')).toEqual({ screen: 'queue' });
    expect(parseRoute('#/')).toEqual({ screen: 'queue' });
    expect(parseRoute('#/queue')).toEqual({ screen: 'queue' });
    expect(parseRoute('#/nonsense')).toEqual({ screen: 'queue' });
  });

  it('routes to the dashboard', () => {
    expect(parseRoute('#/dashboard')).toEqual({ screen: 'dashboard' });
  });

  it('routes to an item and decodes its id', () => {
    expect(parseRoute('#/item/it-42')).toEqual({ screen: 'detail', itemId: 'it-42' });
    expect(parseRoute('#/item/a%2Fb')).toEqual({ screen: 'detail', itemId: 'a/b' });
  });

  it('treats a bare item path as the queue', () => {
    expect(parseRoute('#/item/')).toEqual({ screen: 'queue' });
  });
});
