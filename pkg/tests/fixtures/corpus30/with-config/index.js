var defaults = { retries: 3, verbose: false };
module.exports = function apply(cfg, fn) {
  with (cfg) {
    return fn(retries || defaults.retries);
  }
};
