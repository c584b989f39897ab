import { ApiClient } from './api.js';
import { App } from './app.js';

new App(new ApiClient(), document).start();
