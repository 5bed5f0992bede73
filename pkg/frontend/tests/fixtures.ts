/**
 * Typed access to the JSON captured from a live service run. The files
 * are verbatim HTTP response bodies, so tests exercise the exact shapes
 * the client will see in production.
 */

import { ConfigInfo, Rejection, SessionView } from '../src/api';
import configsJson from './fixtures/configs.json';
import rejectionJson from './fixtures/rejection.json';
import viewAfterMaxJson from './fixtures/view_after_max.json';
import viewCompleteJson from './fixtures/view_complete.json';
import viewFreshJson from './fixtures/view_fresh.json';
import viewReloadedJson from './fixtures/view_reloaded.json';

export const configs = configsJson as ConfigInfo[];
export const rejection = rejectionJson as Rejection;
export const viewFresh = viewFreshJson as unknown as SessionView;
export const viewAfterMax = viewAfterMaxJson as unknown as SessionView;
export const viewComplete = viewCompleteJson as unknown as SessionView;
export const viewReloaded = viewReloadedJson as unknown as SessionView;

export const SESSION_ID = viewFresh.session_id;
